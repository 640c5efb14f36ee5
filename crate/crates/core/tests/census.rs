use std::collections::{BTreeMap, HashMap};

use msd_core::catalog::{s1_x_sn, sphere_genus1};
use msd_core::census::{classify, enumerate_genus1, realize, Classification, Slope, SlopeDiagram};
use msd_core::invariants::invariant_report;
use msd_core::{serialize, validate, Mode};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
    fn components(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Classes of `r` in the units mod `d` under `r ~ -r` and `r ~ r^-1`.
fn lens_orbits(d: i64) -> usize {
    let units: Vec<i64> = (1..d).filter(|&r| gcd(r, d) == 1).collect();
    let idx: HashMap<i64, usize> = units.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut uf = UnionFind::new(units.len());
    for &r in &units {
        let inv = units.iter().copied().find(|&s| (r * s) % d == 1).unwrap();
        uf.union(idx[&r], idx[&(d - r)]);
        uf.union(idx[&r], idx[&inv]);
    }
    uf.components()
}

fn sl(p: i64, q: i64) -> Slope {
    Slope::new(p, q).unwrap()
}

#[test]
fn genus1_class_counts() {
    for n in [4usize, 5] {
        for bound in [1, 2, 5, 10] {
            let r = enumerate_genus1(n, bound, false).unwrap();
            assert_eq!(r.classes.len(), 3, "n={n} B={bound}");
            let mut kinds: Vec<String> = r
                .classes
                .iter()
                .map(|c| c.classification.to_string())
                .collect();
            kinds.sort();
            assert_eq!(kinds, ["s1xsn", "sphere(1)", "sphere(2)"]);
        }
    }
    let r = enumerate_genus1(6, 2, false).unwrap();
    assert_eq!(r.classes.len(), 4);
}

#[test]
fn every_class_realizes_validly() {
    for n in [2usize, 3, 4, 5] {
        for c in enumerate_genus1(n, 3, false).unwrap().classes {
            let d = realize(&SlopeDiagram {
                slopes: c.representative.clone(),
                mode: Mode::NSection,
            })
            .unwrap();
            let v = validate(&d, 10_000);
            assert!(v.ok, "{:?}\n{v}", c.representative);
            let s = d.surface();
            for (fam, slope) in d.families().iter().zip(&c.representative) {
                assert_eq!(
                    s.homology_class(&fam[0]).unwrap().coords(),
                    &[slope.p, slope.q]
                );
            }
        }
    }
}

#[test]
fn realize_matches_catalog() {
    let d = realize(&SlopeDiagram {
        slopes: vec![sl(0, 1); 4],
        mode: Mode::NSection,
    })
    .unwrap();
    assert_eq!(serialize(&d), serialize(&s1_x_sn(4).unwrap()));
    for (n, k) in [(4, 1), (4, 2), (5, 2)] {
        let slopes: Vec<Slope> = (0..n)
            .map(|i| if i < k { sl(0, 1) } else { sl(1, 0) })
            .collect();
        let d = realize(&SlopeDiagram {
            slopes,
            mode: Mode::NSection,
        })
        .unwrap();
        let a = invariant_report(&d, 10_000).unwrap();
        let b = invariant_report(&sphere_genus1(n, k).unwrap(), 10_000).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn realized_h1_matches_slope_matrix() {
    let d = realize(&SlopeDiagram {
        slopes: vec![sl(1, 0), sl(2, 5), sl(1, 0)],
        mode: Mode::NSection,
    })
    .unwrap();
    let v = validate(&d, 10_000);
    assert!(!v.ok);
    let h1 = invariant_report(&d, 10_000).unwrap().h1;
    // the two slopes span a sublattice of index 5
    assert_eq!(h1.to_string(), "Z/5");
}

#[test]
fn lens_classes_match_number_theory() {
    let bound = 7;
    let r = enumerate_genus1(2, bound, true).unwrap();
    let mut per_det: BTreeMap<u64, usize> = BTreeMap::new();
    for c in &r.classes {
        *per_det.entry(c.max_det).or_default() += 1;
    }
    assert_eq!(per_det[&0], 1);
    assert_eq!(per_det[&1], 1);
    for d in 2..=bound {
        assert_eq!(per_det[&(d as u64)], lens_orbits(d), "det {d}");
    }
    assert!(r
        .classes
        .iter()
        .filter(|c| c.max_det >= 2)
        .all(|c| matches!(
            c.classification,
            Classification::Invalid { ref reason, .. } if reason == "lens space pair"
        )));
}

/// Orbits of unordered slope pairs in a box under generators of GL(2, Z)
/// applied where the image stays in the box.
#[test]
fn lens_classes_match_generator_orbits() {
    let bound = 6i64;
    let census = enumerate_genus1(2, bound, true).unwrap();
    let slopes: Vec<Slope> = (-bound..=bound)
        .flat_map(|p| (-bound..=bound).filter_map(move |q| Slope::new(p, q)))
        .filter(|s| s.p.abs() <= bound && s.q.abs() <= bound)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut pairs = Vec::new();
    for (i, a) in slopes.iter().enumerate() {
        for b in &slopes[i..] {
            pairs.push((*a, *b));
        }
    }
    let key = |a: Slope, b: Slope| if a <= b { (a, b) } else { (b, a) };
    let idx: HashMap<(Slope, Slope), usize> =
        pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let gens: [[[i64; 2]; 2]; 3] = [[[0, -1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [0, -1]]];
    let mut uf = UnionFind::new(pairs.len());
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for m in gens {
            let img = |s: Slope| {
                Slope::new(m[0][0] * s.p + m[0][1] * s.q, m[1][0] * s.p + m[1][1] * s.q).unwrap()
            };
            if let Some(&j) = idx.get(&key(img(a), img(b))) {
                uf.union(i, j);
            }
        }
    }
    for d in 0..=3u64 {
        let mut roots: Vec<usize> = (0..pairs.len())
            .filter(|&i| pairs[i].0.det(pairs[i].1).unsigned_abs() == d)
            .map(|i| uf.find(i))
            .collect();
        roots.sort();
        roots.dedup();
        let classes = census.classes.iter().filter(|c| c.max_det == d).count();
        assert_eq!(roots.len(), classes, "det {d}");
    }
}

#[test]
fn classify_examples() {
    assert_eq!(classify(&[sl(3, 2); 5]), Classification::S1xSn);
    assert_eq!(
        classify(&[sl(1, 1), sl(1, 0), sl(1, 1), sl(1, 1)]),
        Classification::Sphere { k: 1 }
    );
}
