use semistable::coupling::{coupled_pair, coupling_gap_curve};
use semistable::empirics::{ks_two_sample, quantile_sorted};
use semistable::rng::replicates;
use semistable::sampling::PoissonSumSampler;
use semistable::{Ecdf, TailModel};

fn half() -> TailModel {
    TailModel::pure(0.5, 1.0, 1.0).unwrap()
}

#[test]
fn median_gap_has_order_one_over_n() {
    let n = 10_000u64;
    let m = half();
    let mut gaps = replicates(201, 0, 1000, |rng| coupled_pair(&m, n, rng).unwrap().gap);
    gaps.sort_by(f64::total_cmp);
    let med = quantile_sorted(&gaps, 0.5);
    assert!(med <= 10.0 / n as f64, "{med}");
}

#[test]
fn poisson_randomized_sum_is_the_poisson_construction() {
    // S_bar at cutoff n^{-2} has the law of the Poisson sum for T(x) = x^{-1/2}
    let n = 1000u64;
    let m = half();
    let s_bar = replicates(202, 0, 100_000, |rng| coupled_pair(&m, n, rng).unwrap().s_bar);
    let intensity = TailModel::pure(0.5, 1.0, 0.0).unwrap();
    let sampler = PoissonSumSampler::new(&intensity, (n as f64).powi(-2), false).unwrap();
    let poisson = replicates(202, 1, 100_000, |rng| sampler.sample(rng));
    let ks = ks_two_sample(&Ecdf::new(s_bar).unwrap(), &Ecdf::new(poisson).unwrap());
    assert!(ks <= 0.01, "{ks}");
}

#[test]
fn gap_curve_reproducible_across_pools() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| coupling_gap_curve(&half(), &[100, 1000], 200, 9).unwrap().report.to_json())
    };
    assert_eq!(run(1), run(4));
}
