use passive_battery::geometry::is_passive;
use passive_battery::mean_energy;
use passive_battery::sampling::{sample_fixed_energy_batch, sample_passive_batch, Sampler};

#[test]
fn passive_sample_mean_is_the_vertex_centroid() {
    let n = 100_000;
    let samples = sample_passive_batch(3, n, 99).unwrap();
    let centroid = [11.0 / 18.0, 5.0 / 18.0, 2.0 / 18.0];
    for (i, &target) in centroid.iter().enumerate() {
        let values: Vec<f64> = samples.iter().map(|s| s.probs()[i]).collect();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sigma = (var / n as f64).sqrt();
        assert!(
            (mean - target).abs() <= 3.0 * sigma,
            "coordinate {i}: {mean} vs {target} (sigma {sigma})"
        );
    }
    assert!(samples.iter().all(is_passive));
}

#[test]
fn uniform_simplex_draws_are_passive_one_time_in_d_factorial() {
    let n = 60_000;
    let mut sampler = Sampler::new(3);
    let passive = (0..n)
        .filter(|_| {
            let q = sampler.simplex(3);
            q.windows(2).all(|w| w[0] >= w[1])
        })
        .count();
    let p = 1.0 / 6.0;
    let sigma = (p * (1.0 - p) / n as f64).sqrt();
    let rate = passive as f64 / n as f64;
    assert!(
        (rate - p).abs() <= 3.0 * sigma,
        "acceptance of active draws {}",
        1.0 - rate
    );
}

#[test]
fn fixed_energy_batches_stay_on_the_slice() {
    for d in [3, 4, 5] {
        let samples = sample_fixed_energy_batch(d, 0.7, 5000, 5).unwrap();
        for s in &samples {
            assert!(is_passive(s));
            assert!((mean_energy(s) - 0.7).abs() <= 1e-12);
        }
        assert_eq!(samples, sample_fixed_energy_batch(d, 0.7, 5000, 5).unwrap());
    }
}
