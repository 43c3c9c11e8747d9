use markov_lis::lis::{lis_combinatorial, lis_patience, rsk_shape};
use markov_lis::{ChainParams, InitialDistribution, LatticeWalk, Word};
use proptest::prelude::*;

fn chain() -> impl Strategy<Value = ChainParams> {
    (0.0f64..=1.0, 0.0f64..=1.0)
        .prop_filter("needs a + b > 0", |(a, b)| a + b > 1e-6)
        .prop_map(|(a, b)| ChainParams::new(a, b).unwrap())
}

fn word(max_m: u8, max_len: usize) -> impl Strategy<Value = Word> {
    (2..=max_m)
        .prop_flat_map(move |m| prop::collection::vec(1..=m, 0..max_len).prop_map(move |xs| Word::new(xs, m).unwrap()))
}

/// `t^step` by repeated multiplication.
fn matrix_power(t: [[f64; 2]; 2], step: u64) -> [[f64; 2]; 2] {
    let mut out = [[1.0, 0.0], [0.0, 1.0]];
    for _ in 0..step {
        let mut next = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = out[i][0] * t[0][j] + out[i][1] * t[1][j];
            }
        }
        out = next;
    }
    out
}

proptest! {
    #[test]
    fn pair_prob_is_a_distribution(p in chain(), p1 in 0.0f64..=1.0, k in 1u64..40, gap in 1u64..40) {
        let init = InitialDistribution::new(p1).unwrap();
        let q = p.pair_prob(&init, k, k + gap).unwrap();
        prop_assert!(q.iter().all(|&x| (0.0..=1.0).contains(&x)));
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // the first coordinate is X_k
        let marginal = p.evolve(&init, k).unwrap();
        prop_assert!((q[0] + q[1] - marginal[0]).abs() < 1e-12);
    }

    #[test]
    fn pair_prob_agrees_with_matrix_powers(p in chain(), p1 in 0.0f64..=1.0, k in 1u64..12, gap in 1u64..12) {
        let t = p.transition_matrix();
        let init = InitialDistribution::new(p1).unwrap();
        let pk = matrix_power(t, k);
        let pl = matrix_power(t, gap);
        let x0 = [p1, 1.0 - p1];
        let mk = [x0[0] * pk[0][0] + x0[1] * pk[1][0], x0[0] * pk[0][1] + x0[1] * pk[1][1]];
        let want = [mk[0] * pl[0][0], mk[0] * pl[0][1], mk[1] * pl[1][0], mk[1] * pl[1][1]];
        let got = p.pair_prob(&init, k, k + gap).unwrap();
        for (g, w) in got.iter().zip(want) {
            prop_assert!((g - w).abs() < 1e-12, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn cov_z_from_pair_prob(p in chain(), k in 1u64..30, gap in 1u64..30) {
        let init = InitialDistribution::stationary(&p);
        let q = p.pair_prob(&init, k, k + gap).unwrap();
        let mu = p.derive().mu;
        let cov = q[0] - q[1] - q[2] + q[3] - mu * mu;
        prop_assert!((cov - p.cov_z(k, k + gap).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn evolve_contracts_towards_stationarity(p in chain(), p1 in 0.0f64..=1.0, n in 0u64..60) {
        let init = InitialDistribution::new(p1).unwrap();
        let d = p.derive();
        let now = p.evolve(&init, n).unwrap();
        let next = p.evolve(&init, n + 1).unwrap();
        prop_assert!((now[0] + now[1] - 1.0).abs() < 1e-12);
        let gap_now = (now[0] - d.pi1).abs();
        let gap_next = (next[0] - d.pi1).abs();
        prop_assert!((gap_next - d.lambda2.abs() * gap_now).abs() < 1e-12);
    }

    #[test]
    fn lis_methods_agree(w in word(6, 300)) {
        prop_assert_eq!(lis_combinatorial(&w), lis_patience(&w));
    }

    #[test]
    fn rsk_shape_is_a_partition_of_n(w in word(5, 200)) {
        let shape = rsk_shape(&w);
        prop_assert_eq!(shape.size(), w.len());
        prop_assert!(shape.rows.windows(2).all(|r| r[0] >= r[1]));
        prop_assert!(shape.rows.len() <= w.alphabet_size() as usize);
        prop_assert_eq!(shape.row(0), lis_patience(&w));
    }

    #[test]
    fn reverse_complement_preserves_lis(w in word(4, 120)) {
        let rev = w.reversed();
        let flipped: Vec<u8> = rev.letters().iter().map(|&x| w.alphabet_size() + 1 - x).collect();
        let flipped = Word::new(flipped, w.alphabet_size()).unwrap();
        prop_assert_eq!(lis_patience(&flipped), lis_patience(&w));
    }

    #[test]
    fn walk_telescopes(w in word(5, 150)) {
        let walk = LatticeWalk::new(&w);
        let m = w.alphabet_size() as usize;
        let n = w.len();
        for k in 0..=n {
            let total: u64 = (1..=m).map(|r| walk.count(k, r) as u64).sum();
            prop_assert_eq!(total as usize, k);
        }
        // sum_r S^r_n telescopes to a^1_n - a^m_n
        let sum: i64 = (1..m).map(|r| walk.s(n, r)).sum();
        prop_assert_eq!(sum, walk.count(n, 1) as i64 - walk.count(n, m) as i64);
        // n/m - (1/m) sum r S^r_n is the count of the top letter
        let weighted: i64 = (1..m).map(|r| r as i64 * walk.s(n, r)).sum();
        prop_assert_eq!(n as i64 - weighted, m as i64 * walk.count(n, m) as i64);
    }
}
