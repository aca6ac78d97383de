//! Catalog round trips, monomial equivalence, and fixed search results.

use aont_core::array::{build_array, verify_aont_array, DEFAULT_MAX_ROWS};
use aont_core::catalog::{catalog, raw_text};
use aont_core::search::{compute_s, SearchConfig, Status};
use aont_core::{verify_linear_aont, AontParams, Fe, LinearAont, Matrix};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn catalog_text_round_trips() {
    for e in catalog().unwrap() {
        let m = e.aont.matrix();
        let again = Matrix::parse(&m.to_text()).unwrap();
        assert_eq!(&again, m, "{}", e.name);
        assert_eq!(&Matrix::parse(raw_text(e.name).unwrap()).unwrap(), m, "{}", e.name);
        assert_eq!(e.aont.params(), e.params);
    }
}

/// Random row permutation, column permutation and column scaling.
fn monomial_image(m: &Matrix, rng: &mut ChaCha8Rng) -> Matrix {
    let f = m.field();
    let s = m.n_rows();
    let mut rp: Vec<usize> = (0..s).collect();
    let mut cp = rp.clone();
    rp.shuffle(rng);
    cp.shuffle(rng);
    let scale: Vec<Fe> = (0..s).map(|_| rng.gen_range(1..f.order())).collect();
    let rows: Vec<Vec<Fe>> =
        rp.iter().map(|&r| cp.iter().zip(&scale).map(|(&c, &k)| f.mul(m.get(r, c), k)).collect()).collect();
    Matrix::from_rows(f, &rows).unwrap()
}

#[test]
fn monomial_images_stay_aonts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for e in catalog().unwrap() {
        let p = e.params;
        let trials = if p.s > 9 { 20 } else { 100 };
        for _ in 0..trials {
            let img = monomial_image(e.aont.matrix(), &mut rng);
            assert!(verify_linear_aont(&img, p.ti, p.to).unwrap().passed(), "{}", e.name);
        }
    }
}

#[test]
fn catalog_arrays_agree_with_rank_test() {
    for e in catalog().unwrap().iter().filter(|e| (e.params.q as u64).pow(e.params.s as u32) <= 1 << 14) {
        let inv = e.aont.matrix().invert().unwrap().unwrap();
        let a = build_array(e.params.q, e.params.s, DEFAULT_MAX_ROWS, |x| inv.row_vec_mul(x).unwrap()).unwrap();
        assert!(verify_aont_array(&a, e.params.ti, e.params.to).unwrap().pass, "{}", e.name);
    }
}

/// GF(4) with codes 0, 1, x = 2, x+1 = 3.
fn gf4_mul(a: Fe, b: Fe) -> Fe {
    const T: [[Fe; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
    T[a as usize][b as usize]
}

// found by `aont search --ti 2 --to 3 --s 7 --q 4` in 3.7M nodes
const M2374: [[Fe; 7]; 7] = [
    [0, 1, 1, 1, 1, 1, 1],
    [1, 0, 1, 1, 2, 2, 3],
    [1, 1, 0, 2, 1, 3, 2],
    [1, 1, 2, 0, 3, 1, 3],
    [1, 2, 1, 3, 0, 3, 1],
    [1, 2, 3, 1, 3, 0, 2],
    [1, 3, 3, 2, 2, 1, 1],
];

#[test]
fn s_2_3_4_reaches_seven() {
    // every 3x2 submatrix has a nonzero 2x2 minor
    for rows in (0..7).combinations(3) {
        for cols in (0..7).combinations(2) {
            let full = rows.iter().tuple_combinations().any(|(&r1, &r2)| {
                let (a, b) = (M2374[r1][cols[0]], M2374[r1][cols[1]]);
                let (c, d) = (M2374[r2][cols[0]], M2374[r2][cols[1]]);
                gf4_mul(a, d) != gf4_mul(b, c)
            });
            assert!(full, "rows {rows:?} cols {cols:?}");
        }
    }
    let f = aont_core::field_of_order(4).unwrap();
    let m = Matrix::from_rows(&f, &M2374.map(|r| r.to_vec())).unwrap();
    let aont = LinearAont::new(m, 2, 3).unwrap();
    assert_eq!(aont.params(), AontParams::new(2, 3, 7, 4).unwrap());
    let inv = aont.matrix().invert().unwrap().unwrap();
    let a = build_array(4, 7, DEFAULT_MAX_ROWS, |x| inv.row_vec_mul(x).unwrap()).unwrap();
    assert!(verify_aont_array(&a, 2, 3).unwrap().pass);
}

#[test]
fn compute_s_small_frontiers() {
    let template = SearchConfig::exhaustive(AontParams::new(2, 4, 4, 2).unwrap());
    let o = compute_s(2, 4, 2, 7, &template).unwrap();
    assert_eq!(o.frontier.unwrap().exact, Some(5));

    let mut template = SearchConfig::exhaustive(AontParams::new(2, 3, 3, 3).unwrap());
    template.use_bounds = false;
    let o = compute_s(2, 3, 3, 8, &template).unwrap();
    let fr = o.frontier.unwrap();
    assert_eq!((fr.largest_found, fr.smallest_impossible, fr.exact), (Some(6), Some(7), Some(6)));
    assert_eq!(o.status, Status::Exhausted);
    assert!(!o.pruned_by_bound);
}
