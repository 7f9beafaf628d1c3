//! Smith-form fixed-point solver against brute-force enumeration of torsion points.
//!
//! A signed block permutation `P ⊗ I₂` acts on the real coordinates of `E³`
//! separately on the indices `{0, 2, 4}` and `{1, 3, 5}`, so the oracle solves
//! two three-dimensional congruences over the grid `(1/N)Z³/Z³` with plain
//! integer arithmetic and takes the product.

use cyquot::cyclotomic::{ratio, Rational};
use cyquot::torus::{AffineAut, FixedKind, IntMatrix, TorusModel};
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_signed_permutation(rng: &mut StdRng) -> [[i64; 3]; 3] {
    let mut perm = [0usize, 1, 2];
    for i in (1..3).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut p = [[0i64; 3]; 3];
    for (i, &j) in perm.iter().enumerate() {
        p[i][j] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    p
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Solutions `k/n` of `(I − P)(k/n) ≡ t (mod Z³)` where `t = num/den`.
fn grid_solutions(p: &[[i64; 3]; 3], num: [i64; 3], den: i64, n: i64) -> Vec<[i64; 3]> {
    assert_eq!(n % den, 0);
    let scale = n / den;
    let mut out = Vec::new();
    for k0 in 0..n {
        for k1 in 0..n {
            for k2 in 0..n {
                let k = [k0, k1, k2];
                let ok = (0..3).all(|i| {
                    let mk: i64 = (0..3).map(|j| p[i][j] * k[j]).sum();
                    (k[i] - mk - num[i] * scale).rem_euclid(n) == 0
                });
                if ok {
                    out.push(k);
                }
            }
        }
    }
    out
}

enum Oracle {
    Empty,
    Isolated(Vec<[i64; 3]>, i64),
    Positive,
}

fn oracle(p: &[[i64; 3]; 3], num: [i64; 3], den: i64) -> Oracle {
    let mut a = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = i64::from(i == j) - p[i][j];
        }
    }
    let d = det3(&a).abs();
    if d != 0 {
        let n = den * d;
        let sols = grid_solutions(p, num, den, n);
        assert_eq!(sols.len() as i64, d, "isolated count equals |det(I − P)|");
        Oracle::Isolated(sols, n)
    } else {
        let n = 24 * den;
        if grid_solutions(p, num, den, n).is_empty() {
            Oracle::Empty
        } else {
            Oracle::Positive
        }
    }
}

fn to_fraction(x: &Rational, n: i64) -> i64 {
    (x * Rational::from_integer(n.into())).to_integer().to_i64().unwrap()
}

#[test]
fn smith_solver_matches_torsion_enumeration() {
    let model = TorusModel::preset("E3").unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed_f1c5);
    let mut seen = [0usize; 3];
    for case in 0..100 {
        let p = random_signed_permutation(&mut rng);
        let linear = IntMatrix::from_rows(&p.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).kron(&IntMatrix::identity(2));
        model.check_linear(&linear).unwrap();
        let den = rng.gen_range(1..=6i64);
        let nums: Vec<i64> = (0..6).map(|_| rng.gen_range(0..den)).collect();
        let t: Vec<Rational> = nums.iter().map(|&k| ratio(k, den)).collect();
        let f = AffineAut::new(linear, t).unwrap();
        let fixed = f.fixed_points();

        let xs = oracle(&p, [nums[0], nums[2], nums[4]], den);
        let ys = oracle(&p, [nums[1], nums[3], nums[5]], den);
        match (&xs, &ys) {
            (Oracle::Empty, _) | (_, Oracle::Empty) => {
                seen[0] += 1;
                assert_eq!(fixed.kind, FixedKind::Empty, "case {case}: {f}");
            }
            (Oracle::Isolated(px, nx), Oracle::Isolated(py, ny)) => {
                seen[1] += 1;
                let count = (px.len() * py.len()) as u64;
                assert_eq!(fixed.kind, FixedKind::Isolated(count), "case {case}: {f}");
                assert_eq!(f.lefschetz_number().unsigned_abs(), count);
                let mut expected: Vec<[i64; 6]> = Vec::new();
                for x in px {
                    for y in py {
                        expected.push([x[0], y[0], x[1], y[1], x[2], y[2]]);
                    }
                }
                let mut got: Vec<[i64; 6]> = fixed
                    .points
                    .iter()
                    .map(|q| {
                        let mut v = [0i64; 6];
                        for (i, c) in q.iter().enumerate() {
                            let n = if i % 2 == 0 { *nx } else { *ny };
                            v[i] = to_fraction(c, n);
                            assert!((c * Rational::from_integer(n.into()) - Rational::from_integer(v[i].into())).is_zero());
                        }
                        v
                    })
                    .collect();
                expected.sort();
                got.sort();
                assert_eq!(got, expected, "case {case}: {f}");
                assert!(fixed.points.iter().all(|q| f.apply(q) == *q));
            }
            _ => {
                seen[2] += 1;
                assert_eq!(fixed.kind, FixedKind::PositiveDimensional, "case {case}: {f}");
            }
        }
    }
    assert!(seen.iter().all(|&c| c > 0), "every outcome exercised: {seen:?}");
}

#[test]
fn lefschetz_counts_of_standard_actions() {
    let minus_one = AffineAut::linear_only(IntMatrix::scalar(6, -1));
    assert_eq!(minus_one.lefschetz_number(), 64);
    assert_eq!(minus_one.fixed_points().kind, FixedKind::Isolated(64));
}
