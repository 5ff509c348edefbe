//! Signatures built from raw (unreduced) parts, checked against a direct
//! evaluation of `λ · [A x = b] · i^{Σ d_j x_j + 2 Σ_{j<l} c_jl x_j x_l}`.

use affsig::f2::{BitVec, F2Matrix};
use affsig::signature::{AffineSignature, ExactScalar, QuadraticPhase};
use num_complex::Complex64;
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Raw {
    k: usize,
    p: i32,
    q: i64,
    rows: Vec<Vec<bool>>,
    rhs: Vec<bool>,
    diag: Vec<u8>,
    cross: Vec<(usize, usize)>,
}

impl Raw {
    fn value(&self, x: &[bool]) -> Complex64 {
        for (row, &b) in self.rows.iter().zip(&self.rhs) {
            let dot = row.iter().zip(x).filter(|(a, b)| **a && **b).count() % 2 == 1;
            if dot != b {
                return Complex64::new(0.0, 0.0);
            }
        }
        let mut e: u32 = 0;
        for (&on, &d) in x.iter().zip(&self.diag) {
            if on {
                e += d as u32;
            }
        }
        for &(j, l) in &self.cross {
            if x[j] && x[l] {
                e += 2;
            }
        }
        let lam = ExactScalar::new(self.p, self.q).to_complex();
        lam * Complex64::i().powu(e % 4)
    }

    fn build(&self) -> AffineSignature {
        let mut cross = F2Matrix::zeros(self.k, self.k);
        for &(j, l) in &self.cross {
            cross.toggle(j, l);
            cross.toggle(l, j);
        }
        let rows = self.rows.iter().map(|r| BitVec::from_bools(r)).collect();
        AffineSignature::from_parts(
            ExactScalar::new(self.p, self.q),
            &F2Matrix::from_rows(self.k, rows),
            &BitVec::from_bools(&self.rhs),
            QuadraticPhase::from_parts(self.diag.clone(), cross),
        )
    }
}

fn raw(max_k: usize) -> impl Strategy<Value = Raw> {
    (1..=max_k).prop_flat_map(|k| {
        let rows = proptest::collection::vec(proptest::collection::vec(any::<bool>(), k), 0..=k);
        let point = proptest::collection::vec(any::<bool>(), k);
        let diag = proptest::collection::vec(0u8..4, k);
        let cross = proptest::collection::vec((0..k, 0..k), 0..=2 * k);
        (-4i32..=4, 0i64..8, rows, point, diag, cross, any::<bool>()).prop_map(
            move |(p, q, rows, point, diag, cross, infeasible)| {
                // Mostly consistent systems through `point`; sometimes arbitrary.
                let rhs = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let dot = r.iter().zip(&point).filter(|(a, b)| **a && **b).count() % 2 == 1;
                        dot ^ (infeasible && i == 0)
                    })
                    .collect();
                let cross = cross.into_iter().filter(|(j, l)| j != l).collect();
                Raw {
                    k,
                    p,
                    q,
                    rows,
                    rhs,
                    diag,
                    cross,
                }
            },
        )
    })
}

fn points(k: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << k).map(move |v| BitVec::from_uint_be(v, k).to_bools())
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-10
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonicalization_preserves_values(r in raw(8)) {
        let f = r.build();
        prop_assert!(f.check_invariants().is_ok(), "{:?}", f.check_invariants());
        for x in points(r.k) {
            let got = f.evaluate(&BitVec::from_bools(&x)).to_complex();
            prop_assert!(close(got, r.value(&x)), "at {:?}", x);
        }
    }

    #[test]
    fn canonical_form_is_unique(r in raw(6), seed in any::<u64>()) {
        // Re-deriving the same function from a shuffled presentation lands on
        // the same structure.
        let f = r.build();
        let mut shuffled = r.clone();
        let n = shuffled.rows.len();
        if n >= 2 {
            let (i, j) = ((seed as usize) % n, (seed as usize / 7) % n);
            if i != j {
                let src = shuffled.rows[j].clone();
                for (a, b) in shuffled.rows[i].iter_mut().zip(src) {
                    *a ^= b;
                }
                shuffled.rhs[i] ^= shuffled.rhs[j];
            }
            shuffled.rows.reverse();
            shuffled.rhs.reverse();
        }
        prop_assert_eq!(shuffled.build(), f);
    }

    #[test]
    fn marginalize_every_variable(r in raw(8)) {
        let f = r.build();
        for j in 0..r.k {
            let m = f.marginalize(j);
            prop_assert!(m.check_invariants().is_ok());
            for y in points(r.k - 1) {
                let mut x0 = y.clone();
                x0.insert(j, false);
                let mut x1 = y.clone();
                x1.insert(j, true);
                let want = r.value(&x0) + r.value(&x1);
                let got = m.evaluate(&BitVec::from_bools(&y)).to_complex();
                prop_assert!(close(got, want), "j={} y={:?}", j, y);
            }
        }
    }

    #[test]
    fn identify_every_pair(r in raw(6)) {
        let f = r.build();
        for j in 0..r.k {
            for l in (0..r.k).filter(|&l| l != j) {
                let g = f.identify(j, l);
                prop_assert!(g.check_invariants().is_ok());
                for y in points(r.k - 1) {
                    let src = if l > j { l - 1 } else { l };
                    let mut x = y.clone();
                    x.insert(j, y[src]);
                    let got = g.evaluate(&BitVec::from_bools(&y)).to_complex();
                    prop_assert!(close(got, r.value(&x)));
                }
            }
        }
    }

    #[test]
    fn tensor_and_permute(a in raw(5), b in raw(4), seed in any::<u64>()) {
        let t = a.build().tensor(&b.build());
        prop_assert!(t.check_invariants().is_ok());
        let k = a.k + b.k;
        let mut sigma: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            sigma.swap(i, (seed as usize >> (i % 32)) % (i + 1));
        }
        let p = t.permute(&sigma);
        prop_assert!(p.check_invariants().is_ok());
        for x in points(k) {
            let want = a.value(&x[..a.k]) * b.value(&x[a.k..]);
            prop_assert!(close(t.evaluate(&BitVec::from_bools(&x)).to_complex(), want));
            let y: Vec<bool> = (0..k).map(|i| x[sigma[i]]).collect();
            let got = p.evaluate(&BitVec::from_bools(&x)).to_complex();
            prop_assert!(close(got, t.evaluate(&BitVec::from_bools(&y)).to_complex()));
        }
    }

    #[test]
    fn text_round_trip(r in raw(10)) {
        let f = r.build();
        let back: AffineSignature = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }
}
