//! Independent oracles for the integration suite: a textbook
//! Kazhdan-Lusztig recursion in the `q` variable and a mu-graph cell
//! partition, both written directly from the classical definitions with no
//! code shared with the library's canonical-basis machinery.

// The recursions walk parallel index tables; keep the plain loops.
#![allow(clippy::needless_range_loop)]

use monodromic::root_datum::Ambient;
use std::collections::HashMap;

/// Dense polynomials in `q` with integer coefficients.
pub type QPoly = Vec<i64>;

fn qp_add(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![0i64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn qp_shift(a: &QPoly, k: usize) -> QPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; k];
    out.extend_from_slice(a);
    out
}

fn qp_scale(a: &QPoly, c: i64) -> QPoly {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| x * c).collect()
}

/// All classical Kazhdan-Lusztig polynomials `P_{x,w}(q)` of the
/// enumerated Weyl group, keyed by element indices. Entries exist exactly
/// for `x <= w` in Bruhat order.
pub struct KlOracle {
    pub p: HashMap<(usize, usize), QPoly>,
    pub lengths: Vec<u32>,
}

impl KlOracle {
    /// `P_{x,w}`; zero (empty) if `x` is not below `w`.
    pub fn poly(&self, x: usize, w: usize) -> QPoly {
        self.p.get(&(x, w)).cloned().unwrap_or_default()
    }

    /// The mu coefficient: the coefficient of `q^{(l(w)-l(x)-1)/2}` in
    /// `P_{x,w}`, zero when the length gap is even or `x` is not below `w`.
    pub fn mu(&self, x: usize, w: usize) -> i64 {
        let gap = self.lengths[w] as i64 - self.lengths[x] as i64;
        if gap <= 0 || gap % 2 == 0 {
            return 0;
        }
        let deg = ((gap - 1) / 2) as usize;
        self.poly(x, w).get(deg).copied().unwrap_or(0)
    }
}

/// Runs the classical recursion over the whole group: for `sw < w` with
/// `v = sw`,
/// `P_{x,w} = q^{1-c} P_{sx,v} + q^c P_{x,v}
///            - sum_{x <= z < v, sz < z} mu(z,v) q^{(l(w)-l(z))/2} P_{x,z}`
/// where `c = 1` if `sx < x` and `c = 0` otherwise.
pub fn classical_kl(amb: &Ambient) -> KlOracle {
    let d = &amb.datum;
    let n = amb.weyl.order();
    let lengths: Vec<u32> = amb.weyl.elements.iter().map(|w| w.len).collect();
    // Element indices sorted by length so recursion arguments exist.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| lengths[i]);
    // Precompute Bruhat comparisons and the left-multiplication tables.
    let mut leq = vec![vec![false; n]; n];
    for x in 0..n {
        for w in 0..n {
            leq[x][w] = d.bruhat_leq(&amb.weyl.elements[x], &amb.weyl.elements[w]);
        }
    }
    let ns = d.n_simple();
    let mut smul = vec![vec![0usize; n]; ns];
    for i in 0..ns {
        let s = d.simple_reflection(i);
        for w in 0..n {
            smul[i][w] = amb.weyl.idx(&d.mul(&s, &amb.weyl.elements[w]).unwrap());
        }
    }
    let mut oracle = KlOracle {
        p: HashMap::new(),
        lengths,
    };
    for &w in &order {
        if oracle.lengths[w] == 0 {
            oracle.p.insert((w, w), vec![1]);
            continue;
        }
        // Choose a left descent s and set v = sw.
        let s = (0..ns)
            .find(|&i| oracle.lengths[smul[i][w]] < oracle.lengths[w])
            .unwrap();
        let v = smul[s][w];
        for x in 0..n {
            if !leq[x][w] {
                continue;
            }
            let sx = smul[s][x];
            let c = if oracle.lengths[sx] < oracle.lengths[x] {
                1usize
            } else {
                0usize
            };
            let mut p = qp_add(
                &qp_shift(&oracle.poly(sx, v), 1 - c),
                &qp_shift(&oracle.poly(x, v), c),
            );
            for z in 0..n {
                if !leq[x][z] || !leq[z][v] || oracle.lengths[smul[s][z]] >= oracle.lengths[z] {
                    continue;
                }
                let m = oracle.mu(z, v);
                if m == 0 {
                    continue;
                }
                let gap = oracle.lengths[w] - oracle.lengths[z];
                debug_assert_eq!(gap % 2, 0);
                p = qp_add(
                    &p,
                    &qp_scale(&qp_shift(&oracle.poly(x, z), (gap / 2) as usize), -m),
                );
            }
            oracle.p.insert((x, w), p);
        }
    }
    // Degree sanity: deg P_{x,w} <= (l(w) - l(x) - 1)/2 for x < w.
    for (&(x, w), p) in &oracle.p {
        if x != w {
            let bound = (oracle.lengths[w] - oracle.lengths[x] - 1) / 2;
            assert!(
                p.len() as u32 <= bound + 1,
                "degree bound violated at ({x},{w})"
            );
        }
        assert_eq!(
            p.first().copied().unwrap_or(0),
            1,
            "constant term must be 1"
        );
    }
    oracle
}

/// Two-sided cell partition from the mu-graph: `x` and `y` are connected
/// by a step `y -> x` when `mu(x,y) != 0` or `mu(y,x) != 0` and the left
/// (or right) descent set of `x` is not contained in that of `y`. Mutual
/// reachability classes are the two-sided cells.
pub fn mu_graph_cells(amb: &Ambient, oracle: &KlOracle) -> Vec<Vec<usize>> {
    let d = &amb.datum;
    let n = amb.weyl.order();
    let left: Vec<Vec<usize>> = amb
        .weyl
        .elements
        .iter()
        .map(|w| d.left_descents(w))
        .collect();
    let right: Vec<Vec<usize>> = amb
        .weyl
        .elements
        .iter()
        .map(|w| d.right_descents(w))
        .collect();
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let mut reach = vec![vec![false; n]; n];
    for y in 0..n {
        reach[y][y] = true;
        for x in 0..n {
            if oracle.mu(x, y) == 0 && oracle.mu(y, x) == 0 {
                continue;
            }
            // Step in the left preorder: y -> x when L(x) is not inside L(y).
            if !subset(&left[x], &left[y]) {
                reach[y][x] = true;
            }
            if !subset(&right[x], &right[y]) {
                reach[y][x] = true;
            }
        }
    }
    // Transitive closure.
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut cell_of = vec![usize::MAX; n];
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if cell_of[i] != usize::MAX {
            continue;
        }
        let c = cells.len();
        let members: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &m in &members {
            cell_of[m] = c;
        }
        cells.push(members);
    }
    cells
}
