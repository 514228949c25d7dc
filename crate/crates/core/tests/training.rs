use noisekit::classify::{hinge_objective, train_binary_hinge, TrainConfig, WeightedSoftmaxObjective};
use noisekit::features::SparseVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point(x: f64, y: f64) -> SparseVector {
    SparseVector::from_pairs(vec![(0, x), (1, y)])
}

/// Two overlapping clusters around (1, 1) and (-1, -0.5).
fn synthetic_points(seed: u64) -> (Vec<SparseVector>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..50 {
        let pos = i % 2 == 0;
        let (cx, cy) = if pos { (1.0, 1.0) } else { (-1.0, -0.5) };
        xs.push(point(cx + rng.gen_range(-1.2..1.2), cy + rng.gen_range(-1.2..1.2)));
        ys.push(pos);
    }
    (xs, ys)
}

fn lattice_minimum(xs: &[SparseVector], ys: &[bool], c: f64) -> f64 {
    let steps: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.05).collect();
    let mut best = f64::INFINITY;
    for &w0 in &steps {
        for &w1 in &steps {
            for &b in &steps {
                best = best.min(hinge_objective(&[w0, w1], b, xs, ys, c));
            }
        }
    }
    best
}

#[test]
fn hinge_training_near_lattice_optimum() {
    for seed in [1, 2, 3] {
        let (xs, ys) = synthetic_points(seed);
        let cfg = TrainConfig::hinge().with_seed(seed);
        let (w, b) = train_binary_hinge(&xs, &ys, 2, &cfg).unwrap();
        let trained = hinge_objective(&w, b, &xs, &ys, cfg.c);
        let oracle = lattice_minimum(&xs, &ys, cfg.c);
        assert!(
            trained <= oracle * 1.05,
            "seed {seed}: trained {trained:.4} vs lattice {oracle:.4}"
        );
    }
}

#[test]
fn weighted_cross_entropy_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dim = 5;
    let features: Vec<SparseVector> = (0..8)
        .map(|_| {
            let mut pairs = Vec::new();
            for j in 0..dim as u32 {
                if rng.gen_bool(0.6) {
                    pairs.push((j, rng.gen_range(-1.0..1.0)));
                }
            }
            SparseVector::from_pairs(pairs)
        })
        .collect();
    let labels: Vec<usize> = (0..8).map(|i| i % 3).collect();
    let weights = [1.4496, 0.8106, 0.9289];
    let obj = WeightedSoftmaxObjective {
        features: &features,
        labels: &labels,
        class_weights: &weights,
        c: 0.7,
        dim,
    };
    let h = 1e-5;
    for _ in 0..20 {
        let params: Vec<f64> = (0..obj.param_len()).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let analytic = obj.gradient(&params);
        let numeric: Vec<f64> = (0..params.len())
            .map(|i| {
                let mut plus = params.clone();
                let mut minus = params.clone();
                plus[i] += h;
                minus[i] -= h;
                (obj.loss(&plus) - obj.loss(&minus)) / (2.0 * h)
            })
            .collect();
        let diff: f64 = analytic.iter().zip(&numeric).map(|(a, n)| (a - n).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
        assert!(diff / scale < 1e-5, "relative error {}", diff / scale);
        for (a, n) in analytic.iter().zip(&numeric) {
            assert!((a - n).abs() / a.abs().max(n.abs()).max(1.0) < 1e-5);
        }
    }
}
