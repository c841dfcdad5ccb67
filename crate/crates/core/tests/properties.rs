use std::collections::BTreeMap;

use openbook_core::comult::{verify_naturality, DEFAULT_TRIANGLE_CAP};
use openbook_core::diagram::{build_heegaard, build_triple, Diagram, Family, Half};
use openbook_core::domain::{boundary_jumps, enumerate_generators, segment_multiplicities, spin_c_classes, BoundarySpec, DomainSolver};
use openbook_core::dsl::{parse_spec, NamedWord, OpenBookSpec};
use openbook_core::floer::{compute, FloerComplex, PipelineOptions};
use openbook_core::page::{apply_mapping_class, geometric_intersection, push_off, self_intersection, EmbeddedPath, Letter, MappingClassWord, Page, Sign};
use openbook_core::picture::EdgeLabel;
use proptest::prelude::*;

const PAGES: [(usize, usize); 3] = [(0, 2), (1, 1), (1, 2)];

fn page_and_word(max_len: usize) -> impl Strategy<Value = (Page, Vec<(usize, i32)>)> {
    (0..PAGES.len()).prop_flat_map(move |i| {
        let (k, n) = PAGES[i];
        let page = Page::standard(k, n).unwrap();
        let m = page.arc_count();
        let letters = prop::collection::vec((0..m, prop_oneof![Just(1i32), Just(-1i32)]), 0..=max_len);
        (Just(page), letters)
    })
}

fn word(page: &Page, letters: &[(usize, i32)]) -> MappingClassWord {
    letters.iter().fold(MappingClassWord::identity(), |w, &(c, p)| w.then(&MappingClassWord::twist(page.band_core(c), p)))
}

fn arcs(page: &Page) -> Vec<EmbeddedPath> {
    (0..page.arc_count()).map(|i| push_off(page, &page.cut_arc(i)).unwrap()).collect()
}

fn family_of(d: &Diagram, half: Half, label: EdgeLabel) -> Family {
    match label {
        EdgeLabel::Alpha { .. } | EdgeLabel::Seam { .. } => Family::Alpha,
        EdgeLabel::Chord { strand, .. } => {
            let map = if half == Half::Top { &d.top_curve } else { &d.bottom_curve };
            d.curves[map[strand]].family
        }
    }
}

/// Crossing and region data up to relabeling.
fn signature(d: &Diagram) -> (Vec<(bool, [usize; 2], Vec<(i64, usize)>)>, Vec<(i64, usize)>) {
    let mut xs: Vec<_> = d
        .crossings
        .iter()
        .map(|c| {
            let mut corners: Vec<(i64, usize)> = c.corners.iter().map(|k| (d.regions[k.region].euler_q, d.regions[k.region].corners)).collect();
            corners.sort();
            (c.half == Half::Top, [d.curves[c.curves[0]].index, d.curves[c.curves[1]].index], corners)
        })
        .collect();
    xs.sort();
    let mut rs: Vec<(i64, usize)> = d.regions.iter().map(|r| (r.euler_q, r.corners)).collect();
    rs.sort();
    (xs, rs)
}

/// Rank over GF(2) by plain Gaussian elimination on boolean rows.
fn naive_rank(c: &FloerComplex) -> usize {
    let n = c.generators.len();
    let mut rows: Vec<Vec<bool>> = (0..n).map(|y| (0..n).map(|x| c.boundary.get(y, x)).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| rows[r][col]) else { continue };
        rows.swap(rank, p);
        for r in 0..n {
            if r != rank && rows[r][col] {
                let pivot = rows[rank].clone();
                for (a, b) in rows[r].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn word_then_inverse_fixes_every_arc((page, letters) in page_and_word(6)) {
        let w = word(&page, &letters);
        let ww = MappingClassWord { letters: w.letters.iter().cloned().chain(w.inverse().letters).collect() };
        for a in arcs(&page) {
            prop_assert_eq!(apply_mapping_class(&page, &ww, &a).unwrap(), a);
        }
    }

    #[test]
    fn twisting_both_paths_keeps_intersections((page, letters) in page_and_word(4), c in 0usize..3, e in prop_oneof![Just(1i32), Just(-1i32)]) {
        let c = c % page.arc_count();
        let w = word(&page, &letters);
        let t = MappingClassWord::twist(page.band_core(c), e);
        let xs: Vec<EmbeddedPath> = arcs(&page).iter().map(|a| apply_mapping_class(&page, &w, a).unwrap()).collect();
        let ys: Vec<EmbeddedPath> = (0..page.arc_count()).map(|i| page.band_core(i)).collect();
        for x in &xs {
            for y in &ys {
                let before = geometric_intersection(&page, x, y).unwrap();
                let after = geometric_intersection(&page, &apply_mapping_class(&page, &t, x).unwrap(), &apply_mapping_class(&page, &t, y).unwrap()).unwrap();
                prop_assert_eq!(before, after);
            }
        }
    }

    #[test]
    fn images_are_reduced_and_embedded((page, letters) in page_and_word(6)) {
        let w = word(&page, &letters);
        for a in arcs(&page) {
            let img = apply_mapping_class(&page, &w, &a).unwrap();
            let mut again = img.clone();
            again.reduce();
            prop_assert_eq!(&again, &img);
            prop_assert_eq!(self_intersection(&page, &img).unwrap(), 0);
        }
    }

    #[test]
    fn diagrams_have_consistent_combinatorics((page, letters) in page_and_word(4)) {
        let d = build_heegaard(&page, &word(&page, &letters)).unwrap();
        let g = 2 * page.genus() + page.boundary_count() - 1;
        prop_assert_eq!(d.closed_genus(), g);
        prop_assert_eq!(d.regions.iter().map(|r| r.euler_q).sum::<i64>(), 4 * (2 - 2 * g as i64));
        for c in &d.crossings {
            prop_assert_eq!(c.corners.len(), 4);
            for k in &c.corners {
                prop_assert_ne!(family_of(&d, c.half, k.from.0), family_of(&d, c.half, k.to.0));
            }
        }
    }

    #[test]
    fn triples_restrict_to_their_double_diagrams((page, g) in page_and_word(3), h in prop::collection::vec((0usize..3, prop_oneof![Just(1i32), Just(-1i32)]), 0..=3)) {
        let m = page.arc_count();
        let h: Vec<(usize, i32)> = h.into_iter().map(|(c, e)| (c % m, e)).collect();
        let (g, h) = (word(&page, &g), word(&page, &h));
        let t = build_triple(&page, &g, &h).unwrap();
        let ab = t.restrict([Family::Alpha, Family::Beta]).unwrap();
        prop_assert_eq!(signature(&ab), signature(&build_heegaard(&page, &g).unwrap()));
    }

    #[test]
    fn boundaries_are_linear((page, letters) in page_and_word(4), seed in any::<u64>()) {
        let d = build_heegaard(&page, &word(&page, &letters)).unwrap();
        let n = d.regions.len();
        let mut s = seed;
        let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((s >> 33) % 7) as i64 - 3 };
        let a: Vec<i64> = (0..n).map(|_| next()).collect();
        let b: Vec<i64> = (0..n).map(|_| next()).collect();
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let add = |u: Vec<i64>, v: Vec<i64>| u.iter().zip(&v).map(|(x, y)| x + y).collect::<Vec<_>>();
        prop_assert_eq!(segment_multiplicities(&d, &sum), add(segment_multiplicities(&d, &a), segment_multiplicities(&d, &b)));
        let jumps = |v: &[i64]| boundary_jumps(&d, v).into_iter().map(|x| x.1).collect::<Vec<_>>();
        prop_assert_eq!(jumps(&sum), add(jumps(&a), jumps(&b)));
        prop_assert_eq!(sum[d.z], a[d.z] + b[d.z]);
    }

    #[test]
    fn spin_c_classes_are_connected_components((page, letters) in page_and_word(4)) {
        let d = build_heegaard(&page, &word(&page, &letters)).unwrap();
        let pair = [Family::Alpha, Family::Beta];
        let gens = enumerate_generators(&d, pair);
        let solver = DomainSolver::new(&d, false);
        let mut parent: Vec<usize> = (0..gens.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize { if p[x] == x { x } else { let r = find(p, p[x]); p[x] = r; r } }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if solver.exists(&BoundarySpec::bigon(pair, &gens[i], &gens[j])) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let roots = (0..gens.len()).filter(|&i| find(&mut parent, i) == i).count();
        prop_assert_eq!(spin_c_classes(&d, pair, &gens).len(), roots);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn complexes_are_block_diagonal_and_ranks_agree((page, letters) in page_and_word(3)) {
        let r = compute(&page, &word(&page, &letters), &PipelineOptions::default()).unwrap();
        let c = &r.complex;
        prop_assert!(c.boundary.mul(&c.boundary).is_zero());
        let mut class = BTreeMap::new();
        for (k, cl) in c.classes.iter().enumerate() {
            for &g in cl {
                class.insert(g, k);
            }
        }
        for y in 0..c.generators.len() {
            for x in 0..c.generators.len() {
                if c.boundary.get(y, x) {
                    prop_assert_eq!(class[&y], class[&x]);
                }
            }
        }
        prop_assert!(c.generators.len() <= 64);
        prop_assert_eq!(c.boundary.rank(), naive_rank(c));
        let xg = c.distinguished.unwrap();
        prop_assert!((0..c.generators.len()).all(|x| !c.boundary.get(xg, x)));
    }

    #[test]
    fn certificates_ignore_cancelling_pairs((page, g) in page_and_word(2), c in 0usize..3) {
        let c = c % page.arc_count();
        let g = word(&page, &g);
        let h = MappingClassWord::twist(page.band_core(0), 1);
        let a = verify_naturality(&page, &g, &h, DEFAULT_TRIANGLE_CAP).unwrap();
        let padded = MappingClassWord {
            letters: g.letters.iter().cloned().chain(MappingClassWord::twist(page.band_core(c), 1).letters).chain(MappingClassWord::twist(page.band_core(c), -1).letters).collect(),
        };
        let b = verify_naturality(&page, &padded, &h, DEFAULT_TRIANGLE_CAP).unwrap();
        prop_assert_eq!(a.checks, b.checks);
        prop_assert_eq!(a.witness.coefficients.iter().sum::<i64>(), b.witness.coefficients.iter().sum::<i64>());
    }

    #[test]
    fn printing_then_parsing_is_the_identity(
        pi in 0..PAGES.len(),
        curves in prop::collection::btree_map("[d-o][a-z0-9_]{0,3}", Just(()), 0..3),
        words in prop::collection::vec(("[r-z][a-z0-9]{0,3}", prop::collection::vec((0usize..3, -2i32..=2), 0..4)), 0..4),
    ) {
        let (k, n) = PAGES[pi];
        let page = Page::standard(k, n).unwrap();
        let m = page.arc_count();
        let curves: BTreeMap<String, EmbeddedPath> = curves.into_keys().enumerate().map(|(i, name)| (name, EmbeddedPath::closed(vec![Letter::new(i % m, Sign::Plus)]))).collect();
        let mut seen = std::collections::HashSet::new();
        let words: Vec<(String, NamedWord)> = words
            .into_iter()
            .filter(|(name, _)| seen.insert(name.clone()))
            .map(|(name, tw)| (name, NamedWord::new(tw.into_iter().map(|(c, p)| (format!("c{}", c % m), p)).collect())))
            .collect();
        let spec = OpenBookSpec { genus: k, boundary: n, curves, words };
        let text = spec.to_text();
        let back = parse_spec(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.to_text(), text);
    }
}

fn slope_matrix(letters: &[(usize, i32)]) -> [[i64; 2]; 2] {
    letters.iter().fold([[1, 0], [0, 1]], |m, &(c, e)| {
        let e = e as i64;
        let t = if c == 0 { [[1, e], [0, 1]] } else { [[1, 0], [-e, 1]] };
        [[t[0][0] * m[0][0] + t[0][1] * m[1][0], t[0][0] * m[0][1] + t[0][1] * m[1][1]], [t[1][0] * m[0][0] + t[1][1] * m[1][0], t[1][0] * m[0][1] + t[1][1] * m[1][1]]]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// On the once-punctured torus `|H_1| = |2 − tr M|`; the Euler
    /// characteristic of the hat group is `|H_1|` (and 0 when infinite).
    #[test]
    fn torus_ranks_are_bounded_by_first_homology(letters in prop::collection::vec((0usize..2, prop_oneof![Just(1i32), Just(-1i32)]), 0..=4)) {
        let page = Page::standard(1, 1).unwrap();
        let m = slope_matrix(&letters);
        let h = (2 - (m[0][0] + m[1][1])).unsigned_abs() as usize;
        let r = compute(&page, &word(&page, &letters), &PipelineOptions::default()).unwrap();
        prop_assert!(r.rank >= h);
        prop_assert_eq!(r.rank % 2, h % 2);
        if h > 0 {
            prop_assert_eq!(r.class_ranks.len(), h);
        }
    }
}
