use cyquot::chamber::{apply_word, chamber_test, orbit_reflection, reflect_into_chamber, reflect_single, NodalOrbitClass, QuadLattice};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn lattice() -> QuadLattice {
    QuadLattice::hyperbolic_plus_nodes(2)
}

/// Walls on U ⊕ ⟨-2⟩² stable under swapping the two nodes; the first orbit has two vectors.
fn walls(l: &QuadLattice) -> Vec<NodalOrbitClass> {
    vec![
        NodalOrbitClass::new(l, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap(),
        NodalOrbitClass::new(l, vec![vec![1, -1, 0, 0]]).unwrap(),
        NodalOrbitClass::new(l, vec![vec![1, 1, 1, 1]]).unwrap(),
    ]
}

/// Single walls; the last two generate an infinite dihedral group.
fn single_walls(l: &QuadLattice) -> Vec<NodalOrbitClass> {
    [vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, -1, 0, 0], vec![1, 0, 1, 0]]
        .into_iter()
        .map(|b| NodalOrbitClass::new(l, vec![b]).unwrap())
        .collect()
}

const H: [i64; 4] = [1, 3, -1, -1];

fn vector() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-50i64..=50, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn orbit_reflections_are_isometric_involutions(x in vector(), z in vector(), k in 0usize..3) {
        let l = lattice();
        let o = &walls(&l)[k];
        let rx = orbit_reflection(&l, &x, o).unwrap();
        let rz = orbit_reflection(&l, &z, o).unwrap();
        prop_assert_eq!(orbit_reflection(&l, &rx, o).unwrap(), x.clone());
        prop_assert_eq!(l.pair(&rx, &rz).unwrap(), l.pair(&x, &z).unwrap());
        let b = &o.vectors()[0];
        let sx = reflect_single(&l, &x, b).unwrap();
        prop_assert_eq!(reflect_single(&l, &sx, b).unwrap(), x.clone());
        prop_assert_eq!(l.norm(&sx).unwrap(), l.norm(&x).unwrap());
    }
}

fn check_walks(l: &QuadLattice, o: &[NodalOrbitClass], sample: impl Fn(&mut StdRng) -> Vec<i64>) {
    let mut rng = StdRng::seed_from_u64(11);
    let mut done = 0;
    while done < 1000 {
        let mut x = sample(&mut rng);
        if l.norm(&x).unwrap() < 0 {
            continue;
        }
        if l.pair(&x, &H).unwrap() < 0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        let walk = reflect_into_chamber(l, &x, o, &H, 1_000_000).unwrap();
        assert!(chamber_test(l, &walk.y, o).unwrap());
        assert_eq!(apply_word(l, &x, o, &walk.word).unwrap(), walk.y);
        let mut y = x.clone();
        for &k in &walk.word {
            let next = orbit_reflection(l, &y, &o[k]).unwrap();
            assert!(l.pair(&next, &H).unwrap() < l.pair(&y, &H).unwrap());
            y = next;
        }
        done += 1;
    }
}

#[test]
fn walks_reach_the_chamber() {
    let l = lattice();
    check_walks(&l, &single_walls(&l), |rng| (0..4).map(|_| rng.gen_range(-40..=40)).collect());
}

#[test]
fn invariant_walks_reach_the_orbit_chamber() {
    let l = lattice();
    check_walks(&l, &walls(&l), |rng| {
        let node = rng.gen_range(-40..=40);
        vec![rng.gen_range(-40..=40), rng.gen_range(-40..=40), node, node]
    });
}
