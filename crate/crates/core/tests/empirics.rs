use semistable::empirics::{
    ks_distance, martin_lof_experiment, merging_experiment, negligibility_experiment,
    order_statistics_experiment,
};
use semistable::rng::replicates;
use semistable::Ecdf;

#[test]
fn uniform_sample_ks_within_kolmogorov_bound() {
    let xs = replicates(301, 0, 100_000, |rng| rng.uniform());
    let ks = ks_distance(&Ecdf::new(xs).unwrap(), &|x: f64| x.clamp(0.0, 1.0));
    assert!(ks <= 1.95 / (1e5f64).sqrt(), "{ks}");
}

#[test]
fn experiments_ignore_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let a = martin_lof_experiment(4, 10_000, 5).unwrap().to_json();
                let b = merging_experiment(24, 10_000, 5).unwrap().to_json();
                let c = negligibility_experiment(&[0.5, 2.5], 1000, 50, 5).unwrap().to_json();
                format!("{a}\n{b}\n{c}")
            })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn maximum_order_statistic_mean() {
    let r = order_statistics_experiment(10, 10, 100_000, 1.0, 6).unwrap();
    let mean = r.moments.details["mean"].as_f64().unwrap();
    let se = (r.moments.details["variance"].as_f64().unwrap() / 1e5).sqrt();
    assert!((mean - 10.0 / 11.0).abs() <= 3.0 * se);
}

#[test]
fn negligibility_ratios_in_unit_interval() {
    let r = negligibility_experiment(&[0.5, 1.5, 2.5], 1000, 100, 8).unwrap();
    for row in r.details["rows"].as_array().unwrap() {
        let v = row["median_ratio"].as_f64().unwrap();
        assert!(v > 0.0 && v <= 1.0);
    }
}
