use num_complex::Complex64;
use proptest::prelude::*;
use schur_horn::linalg::{conjugate_by_givens, DenseHermitian, MatrixKind};
use schur_horn::strong_sh::{block_decompose, connected_components, spectrum_window, BlockTag};
use schur_horn::{
    correct_diagonal, eig_sym, schur_horn_correct, solve_correction_angle, solve_correction_angle_hermitian,
    StepKind, TwoByTwoProblem,
};

const EIG_TOL: f64 = 1e-13;

/// Sorted `d` and a spectrum majorized by it: small transfers from lower to
/// higher sorted positions.
fn admissible(max_n: usize, max_eps: f64) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=max_n)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(-3.0f64..3.0, n),
                prop::collection::vec((0..n, 0..n, 0.0f64..1.0), 1..5),
                1e-8f64..max_eps,
            )
        })
        .prop_map(|(mut d, moves, eps)| {
            d.sort_by(f64::total_cmp);
            let mut l = d.clone();
            for (p, q, w) in moves {
                let (lo, hi) = (p.min(q), p.max(q));
                l[lo] -= w * eps;
                l[hi] += w * eps;
            }
            (d, l)
        })
}

fn two_by_two() -> impl Strategy<Value = (TwoByTwoProblem, bool)> {
    (-5.0f64..5.0, -5.0f64..5.0, (-3.0f64..3.0, -3.0f64..3.0), 0.0f64..1.0, any::<bool>()).prop_map(
        |(b11, b22, (re, im), s, complex)| {
            let b12 = if complex { Complex64::new(re, im) } else { Complex64::new(re, 0.0) };
            // Any target between the eigenvalues is feasible.
            let tr = b11 + b22;
            let disc = ((b11 - b22) / 2.0).hypot(b12.norm());
            let (lo, hi) = (tr / 2.0 - disc, tr / 2.0 + disc);
            let d1 = lo + s * (hi - lo);
            (TwoByTwoProblem::complex(b11, b12, b22, d1, tr - d1), complex)
        },
    )
}

fn apply(p: &TwoByTwoProblem, g: &schur_horn::GivensParams) -> DenseHermitian {
    let mut b = DenseHermitian::from_diagonal(&[p.b11, p.b22], MatrixKind::ComplexHermitian);
    b.set(0, 1, p.b12);
    conjugate_by_givens(&b, g).unwrap()
}

/// Random real-symmetric matrix whose graph is a random spanning
/// tree on each of up to three index groups, groups shifted apart by 4.
fn structured(max_n: usize) -> impl Strategy<Value = DenseHermitian> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0usize..3, n),
                prop::collection::vec(-2.0f64..2.0, n),
                prop::collection::vec(0.2f64..1.5, n),
                prop::collection::vec(any::<u16>(), n),
            )
        })
        .prop_map(|(n, group, diag, weights, picks)| {
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                rows[i][i] = diag[i] + 4.0 * group[i] as f64;
                let earlier: Vec<usize> = (0..i).filter(|&k| group[k] == group[i]).collect();
                if !earlier.is_empty() {
                    let p = earlier[picks[i] as usize % earlier.len()];
                    rows[i][p] = weights[i];
                    rows[p][i] = weights[i];
                }
            }
            DenseHermitian::from_real_rows(&rows).unwrap()
        })
}

fn irreducible(max_n: usize) -> impl Strategy<Value = DenseHermitian> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(-2.0f64..2.0, n),
                prop::collection::vec(prop_oneof![Just(1.0), -1.0f64..1.0], n),
                prop::collection::vec(any::<u16>(), n),
            )
        })
        .prop_map(|(n, diag, weights, picks)| {
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                rows[i][i] = diag[i];
                if i > 0 {
                    let p = picks[i] as usize % i;
                    let w = if weights[i].abs() < 1e-3 { 0.5 } else { weights[i] };
                    rows[i][p] = w;
                    rows[p][i] = w;
                }
            }
            DenseHermitian::from_real_rows(&rows).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn givens_puts_target_in_place((p, complex) in two_by_two()) {
        let g = if complex { solve_correction_angle_hermitian(&p) } else { solve_correction_angle(&p) }.unwrap();
        let out = apply(&p, &g);
        let scale = 1.0 + p.b11.abs() + p.b22.abs() + p.b12.norm();
        prop_assert!((out.diag_entry(0) - p.d1).abs() <= 1e-11 * scale);
        prop_assert!((out.diag_entry(1) - (p.b11 + p.b22 - p.d1)).abs() <= 1e-11 * scale);
        prop_assert!(g.theta.abs() <= std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn hermitian_solver_agrees_on_real_input((p, _) in two_by_two()) {
        let real = TwoByTwoProblem::real(p.b11, p.b12.re, p.b22, p.d1, p.d2);
        prop_assume!(real.is_feasible());
        let r = solve_correction_angle(&real);
        let h = solve_correction_angle_hermitian(&real);
        prop_assert_eq!(r.map(|g| g.theta), h.map(|g| g.theta));
    }

    #[test]
    fn diagonal_correction_invariants((d, l) in admissible(8, 1e-3)) {
        let c = correct_diagonal(&d, &l).unwrap();
        let scale = c.scale;
        prop_assert!(c.diag_residual <= 1e-10 * scale);
        let e = eig_sym(&c.result, EIG_TOL).unwrap();
        let mut ls = l.clone();
        ls.sort_by(f64::total_cmp);
        for (x, y) in e.eigenvalues.iter().zip(&ls) {
            prop_assert!((x - y).abs() <= 1e-8 * scale);
        }
        let n = d.len();
        prop_assert!(c.steps.len() <= n * (n - 1) / 2);
        // Each corrected entry leaves the queue for good.
        let mut fixed = std::collections::HashSet::new();
        for s in &c.steps {
            prop_assert!(!fixed.contains(&s.i) && !fixed.contains(&s.j));
            prop_assert_eq!(s.kind, StepKind::Diagonal);
            fixed.insert(s.i);
        }
        prop_assert!(schur_horn::fro_dist(&c.replay().unwrap(), &c.result).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn off_diagonals_stay_square_root_small((d, l) in admissible(8, 1e-3)) {
        let c = correct_diagonal(&d, &l).unwrap();
        let eps: f64 = d.iter().zip(&l).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        let n = d.len();
        let gap = 1.0 + d[n - 1] - d[0];
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max(c.result.get(i, j).norm());
            }
        }
        prop_assert!(worst <= 4.0 * (eps * gap * n as f64).sqrt() + 1e-12, "{worst} vs eps {eps}");
    }

    #[test]
    fn irreducible_windows_have_measure(a in irreducible(8)) {
        prop_assert_eq!(connected_components(&a, 1e-12 * a.fro_norm()).len(), 1);
        let w = spectrum_window(&a).unwrap();
        prop_assert!(w.measure() > 1e-12 * (1.0 + a.max_abs()));
    }

    #[test]
    fn decomposition_orders_windows_and_reassembles(a in structured(9)) {
        let p = block_decompose(&a).unwrap();
        let scale = 1.0 + a.max_abs();
        for pair in p.blocks.windows(2) {
            prop_assert!(pair[0].window.hi <= pair[1].window.lo + 1e-12 * scale);
        }
        let mut seen = vec![false; a.n()];
        for &i in &p.permutation {
            prop_assert!(!seen[i]);
            seen[i] = true;
        }
        // Reassemble from the blocks and compare entrywise with the input.
        let mut back = DenseHermitian::zeros(a.n(), a.kind());
        for (b, blk) in p.blocks.iter().enumerate() {
            let idx = p.block_indices(b);
            prop_assert_eq!(blk.tag == BlockTag::Scalar, idx.len() == 1 && blk.components.len() == 1);
            for &i in idx {
                for &j in idx {
                    back.set(i, j, a.get(i, j));
                }
            }
        }
        prop_assert_eq!(back, a);
    }

    #[test]
    fn pipeline_is_idempotent(a in structured(6), bump in 1e-6f64..1e-3) {
        let lam = eig_sym(&a, EIG_TOL).unwrap().eigenvalues;
        // Spreading the two extreme eigenvalues keeps every block-level
        // partial trace at or below that of the input.
        let n = lam.len();
        let mut lt = lam.clone();
        lt[0] -= bump;
        lt[n - 1] += bump;
        let c = schur_horn_correct(&a, &lt).unwrap();
        prop_assert!(c.diag_residual <= 1e-10 * c.scale);
        prop_assert!(c.spectrum_residual <= 1e-8 * c.scale);
        let again = schur_horn_correct(&c.result, &c.target_spectrum).unwrap();
        prop_assert_eq!(again.rotation_count(), 0);
        prop_assert!(schur_horn::fro_dist(&again.result, &c.result).unwrap() <= 1e-9 * c.scale);
    }
}
