use rveawg_core::gan::{GanConfig, TrainingCorpus, Wgan};
use rveawg_core::nn::Matrix;
use rveawg_core::RandomSource;

fn repeated(point: &[f64], copies: usize) -> Matrix {
    Matrix::from_rows(&vec![point.to_vec(); copies]).unwrap()
}

fn cluster(center: &[f64], count: usize, spread: f64, rng: &mut RandomSource) -> Matrix {
    let rows: Vec<Vec<f64>> = (0..count)
        .map(|_| {
            center
                .iter()
                .map(|c| c + spread * rng.standard_normal())
                .collect()
        })
        .collect();
    Matrix::from_rows(&rows).unwrap()
}

#[test]
fn generator_collapses_onto_a_single_point() {
    let c = [0.3, -0.5, 0.7, 0.0];
    for seed in 0..5 {
        let mut rng = RandomSource::new(seed);
        let cfg = GanConfig {
            epochs: 300,
            ..GanConfig::default()
        };
        let mut gan = Wgan::new(4, cfg, &mut rng).unwrap();
        let corpus = TrainingCorpus::new(repeated(&c, 64), Matrix::zeros(0, 4)).unwrap();
        gan.train(&corpus, &mut rng).unwrap();
        let mean = gan.generate(256, &mut rng).unwrap().mean_row();
        for (m, target) in mean.iter().zip(&c) {
            assert!((m - target).abs() < 0.15, "seed {seed}: mean {mean:?}");
        }
    }
}

#[test]
fn generator_covers_two_clusters() {
    let a = [0.6, 0.6];
    let b = [-0.6, -0.6];
    let mut rng = RandomSource::new(17);
    let mut rows = cluster(&a, 32, 0.03, &mut rng).to_rows();
    rows.extend(cluster(&b, 32, 0.03, &mut rng).to_rows());
    let corpus =
        TrainingCorpus::new(Matrix::from_rows(&rows).unwrap(), Matrix::zeros(0, 2)).unwrap();
    let mut gan = Wgan::new(
        2,
        GanConfig {
            epochs: 400,
            ..GanConfig::default()
        },
        &mut rng,
    )
    .unwrap();
    gan.train(&corpus, &mut rng).unwrap();
    let samples = gan.generate(200, &mut rng).unwrap();
    let separation = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let mut nearest: Vec<f64> = samples
        .iter_rows()
        .map(|s| {
            let da = ((s[0] - a[0]).powi(2) + (s[1] - a[1]).powi(2)).sqrt();
            let db = ((s[0] - b[0]).powi(2) + (s[1] - b[1]).powi(2)).sqrt();
            da.min(db)
        })
        .collect();
    nearest.sort_by(f64::total_cmp);
    let median = nearest[nearest.len() / 2];
    assert!(median < separation / 2.0, "median distance {median}");
}

#[test]
fn pretraining_separates_good_from_bad() {
    let n = 6;
    for seed in 0..5 {
        let mut rng = RandomSource::new(100 + seed);
        let good = cluster(&vec![0.5; n], 40, 0.05, &mut rng);
        let bad = cluster(&vec![-0.5; n], 40, 0.05, &mut rng);
        let cfg = GanConfig {
            pretrain_epochs: 200,
            ..GanConfig::default()
        };
        let mut gan = Wgan::new(n, cfg, &mut rng).unwrap();
        let corpus = TrainingCorpus::new(good.clone(), bad.clone()).unwrap();
        gan.pretrain_discriminator(&corpus, &mut rng).unwrap();
        let dg: f64 = gan.critic.predict(&good).unwrap().mean_row()[0];
        let db: f64 = gan.critic.predict(&bad).unwrap().mean_row()[0];
        assert!(dg > db, "seed {seed}: D(good) {dg} <= D(bad) {db}");
    }
}

#[test]
fn training_is_reproducible() {
    let run = || {
        let mut rng = RandomSource::new(3);
        let mut gan = Wgan::new(
            3,
            GanConfig {
                epochs: 20,
                ..GanConfig::default()
            },
            &mut rng,
        )
        .unwrap();
        let good = cluster(&[0.2, 0.1, -0.3], 16, 0.1, &mut rng);
        let bad = cluster(&[-0.2, 0.4, 0.3], 16, 0.1, &mut rng);
        let corpus = TrainingCorpus::new(good, bad).unwrap();
        gan.pretrain_discriminator(&corpus, &mut rng).unwrap();
        let trace = gan.train(&corpus, &mut rng).unwrap();
        (gan, trace)
    };
    let (g1, t1) = run();
    let (g2, t2) = run();
    assert_eq!(g1, g2);
    assert_eq!(t1, t2);
    assert!(t1
        .iter()
        .all(|e| e.penalty >= 0.0 && e.critic_loss.is_finite()));
}
