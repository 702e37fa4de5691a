//! Twisted counting: representations fixed by a Frobenius twist in the
//! torus-like case, where the small group attached to the parameter is
//! trivial.
//!
//! A [`Twist`] is a finite-field size `q` together with a diagram
//! automorphism given as a permutation of the simple roots. The twist acts
//! on parameters by `chi -> q^{-1} (delta_* chi)` (inverse taken mod the
//! parameter order) and on Weyl elements by conjugation with the lattice
//! matrix induced by the diagram permutation.
//!
//! When the small group is trivial, the blocks from the twisted parameter
//! back to the original form a finite set carrying an action of the
//! component group `Omega` via `gamma . beta = gamma beta eps(gamma)^{-1}`.
//! The fixed-representation count is the sum, over the orbits of this
//! action, of the stabilizer orders. For the standard rank-`n-1` special
//! linear and unitary groups with a full Kummer parameter this evaluates to
//! `gcd(n, q-1)^2` and `gcd(n, q+1)^2` respectively.
//!
//! Symmetric groups of large rank cannot be enumerated, so when the root
//! datum is the standard simply connected type-A datum the computation runs
//! in a one-line-notation model on value vectors and never touches the full
//! Weyl group.

use std::collections::HashMap;

use crate::char_param::{phi_chi, q_compat, stabilizer_and_omega, w_act, CharParam};
use crate::error::{Error, Result};
use crate::root_datum::{enum_cap, rat_inverse, Ambient, Rational, RootDatum};
use num::traits::Zero;

/// The kind of twist: a field-power twist that divides parameters by `q`,
/// or a plain finite-order automorphism that leaves `q` out of the action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistKind {
    /// Situation with a field of `q` elements: parameters pick up `q^{-1}`.
    Frobenius,
    /// A finite-order automorphism acting through the diagram part only.
    Automorphism,
}

/// A twist: kind, field size, and a diagram automorphism.
#[derive(Debug, Clone)]
pub struct Twist {
    /// Field-power or plain automorphism.
    pub kind: TwistKind,
    /// The finite-field size (a prime power; primality is not checked, but
    /// coprimality with the parameter order is). Ignored by plain
    /// automorphism twists.
    pub q: u64,
    /// Permutation of the simple roots (identity for a split twist).
    pub simple_perm: Vec<usize>,
}

impl Twist {
    /// The split field-power twist.
    pub fn split(datum: &RootDatum, q: u64) -> Self {
        Twist {
            kind: TwistKind::Frobenius,
            q,
            simple_perm: (0..datum.n_simple()).collect(),
        }
    }

    /// The field-power twist by the order-reversing diagram automorphism
    /// (for type A this is the unitary-group twist).
    pub fn reversal(datum: &RootDatum, q: u64) -> Self {
        let n = datum.n_simple();
        Twist {
            kind: TwistKind::Frobenius,
            q,
            simple_perm: (0..n).rev().collect(),
        }
    }

    /// A plain automorphism twist with the given diagram permutation.
    pub fn automorphism(simple_perm: Vec<usize>) -> Self {
        Twist {
            kind: TwistKind::Automorphism,
            q: 1,
            simple_perm,
        }
    }

    /// Whether the diagram part is trivial.
    pub fn is_split(&self) -> bool {
        self.simple_perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// The integral matrix `D` on the cocharacter lattice induced by the
/// diagram permutation: `D a_i^vee = a_{perm(i)}^vee`, extended linearly.
/// Requires the coroots to span (a semisimple datum) and checks that `D`
/// also permutes the simple roots accordingly.
pub fn delta_matrix(datum: &RootDatum, twist: &Twist) -> Result<Vec<i64>> {
    let r = datum.rank();
    let n = datum.n_simple();
    if twist.simple_perm.len() != n {
        return Err(Error::InvalidInput(format!(
            "diagram permutation has length {}, expected {}",
            twist.simple_perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &j in &twist.simple_perm {
        if j >= n || seen[j] {
            return Err(Error::InvalidInput(
                "diagram permutation is not a permutation".to_string(),
            ));
        }
        seen[j] = true;
    }
    if n != r {
        return Err(Error::Refusal(
            "diagram twists need a semisimple datum (coroots must span)".to_string(),
        ));
    }
    // Columns of C are the simple coroots; D = C_perm * C^-1.
    let c: Vec<Vec<Rational>> = (0..r)
        .map(|row| {
            (0..n)
                .map(|col| Rational::from_integer(datum.coroot(col)[row]))
                .collect()
        })
        .collect();
    let c_inv = rat_inverse(&c)
        .ok_or_else(|| Error::Refusal("coroots do not form a basis of the lattice".to_string()))?;
    let mut d = vec![0i64; r * r];
    for row in 0..r {
        for col in 0..r {
            let mut acc = Rational::zero();
            for k in 0..n {
                acc +=
                    Rational::from_integer(datum.coroot(twist.simple_perm[k])[row]) * c_inv[k][col];
            }
            if !acc.denom().eq(&1) {
                return Err(Error::Refusal(
                    "diagram permutation does not preserve the lattice".to_string(),
                ));
            }
            d[row * r + col] = *acc.numer();
        }
    }
    // D must carry simple root i to simple root perm(i): a_i D^-1 = a_{p(i)},
    // equivalently a_{p(i)} D = a_i.
    let d_rat: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| Rational::from_integer(d[i * r + j]))
                .collect()
        })
        .collect();
    let d_inv = rat_inverse(&d_rat)
        .ok_or_else(|| Error::Refusal("twist matrix is singular".to_string()))?;
    for i in 0..n {
        for col in 0..r {
            let mut acc = Rational::zero();
            for k in 0..r {
                acc += Rational::from_integer(datum.root(i)[k]) * d_inv[k][col];
            }
            if acc != Rational::from_integer(datum.root(twist.simple_perm[i])[col]) {
                return Err(Error::Refusal(
                    "diagram permutation is not a root-system automorphism".to_string(),
                ));
            }
        }
    }
    Ok(d)
}

fn mod1(x: Rational) -> Rational {
    let d = *x.denom();
    Rational::new(x.numer().rem_euclid(d), d)
}

/// `q^{-1} mod n` for coprime arguments.
fn inv_mod(q: i64, n: i64) -> Result<i64> {
    let (mut a, mut b) = (q.rem_euclid(n), n);
    let (mut x0, mut x1) = (1i64, 0i64);
    while b != 0 {
        let t = a / b;
        (a, b) = (b, a - t * b);
        (x0, x1) = (x1, x0 - t * x1);
    }
    if a != 1 {
        return Err(Error::BadQ {
            q: q as u64,
            reason: format!("q is not invertible mod {n}"),
        });
    }
    Ok(x0.rem_euclid(n))
}

/// The twisted parameter: `q^{-1} (delta_* chi)` for a field-power twist,
/// `delta_* chi` for a plain automorphism.
pub fn eps_act(datum: &RootDatum, twist: &Twist, chi: &CharParam) -> Result<CharParam> {
    let d = delta_matrix(datum, twist)?;
    let r = datum.rank();
    // (delta_* chi)(e_k) = chi(D^-1 e_k); since D permutes the coroots and
    // chi is evaluated through the pairing, this is sum_j D[j][k]... solve
    // via the rational inverse of D.
    let d_rat: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| Rational::from_integer(d[i * r + j]))
                .collect()
        })
        .collect();
    let d_inv = rat_inverse(&d_rat)
        .ok_or_else(|| Error::Refusal("twist matrix is singular".to_string()))?;
    let u = match twist.kind {
        TwistKind::Frobenius => Rational::from_integer(inv_mod(twist.q as i64, chi.order)?),
        TwistKind::Automorphism => Rational::from_integer(1),
    };
    let mut out = vec![Rational::zero(); r];
    for (k, o) in out.iter_mut().enumerate() {
        let mut acc = Rational::zero();
        for j in 0..r {
            acc += d_inv[j][k] * chi.chi[j];
        }
        *o = mod1(acc * u);
    }
    CharParam::new(datum, out)
}

/// Report of the orbit analysis behind a fixed-representation count.
#[derive(Debug)]
pub struct CountReport {
    /// The fixed-representation count.
    pub count: u64,
    /// Order of the component group `Omega`.
    pub omega_order: usize,
    /// Size of the twisted transporter set.
    pub transporter_size: usize,
    /// `(orbit size, stabilizer order)` per orbit of the twisted action.
    pub orbits: Vec<(usize, usize)>,
    /// Which engine produced the numbers.
    pub engine: &'static str,
}

/// Counts the representations fixed by the twist, in the case where the
/// small group of the parameter is trivial. Returns a refusal otherwise.
pub fn count_torus_case(datum: &RootDatum, chi: &CharParam, twist: &Twist) -> Result<CountReport> {
    if let Some(warning) = q_compat(chi, twist.q)? {
        // The order not dividing q-1 is tolerated here: the twisted action
        // only needs q invertible mod the order.
        let _ = warning;
    }
    if is_standard_type_a(datum) {
        let rev: Vec<usize> = (0..datum.n_simple()).rev().collect();
        let idn: Vec<usize> = (0..datum.n_simple()).collect();
        if twist.simple_perm == idn || twist.simple_perm == rev {
            return count_type_a(datum, chi, twist);
        }
    }
    count_generic(datum, chi, twist)
}

/// Whether the datum is the standard simply connected type-A datum: label
/// `A{r}`, semisimple, coroots equal to the lattice basis.
fn is_standard_type_a(datum: &RootDatum) -> bool {
    let r = datum.rank();
    if datum.label() != format!("A{r}") || datum.n_simple() != r {
        return false;
    }
    (0..r).all(|i| (0..r).all(|k| datum.coroot(i)[k] == if i == k { 1 } else { 0 }))
}

/// Orbit/stabilizer accounting shared by both engines. `elements` indexes
/// the transporter set; `act(g, b)` gives the action of `Omega` index `g`.
fn tally_orbits<T: Eq + std::hash::Hash + Clone>(
    elements: &[T],
    omega_order: usize,
    act: impl Fn(usize, &T) -> T,
) -> Result<CountReport> {
    let index: HashMap<&T, usize> = elements.iter().zip(0..).collect();
    let mut seen = vec![false; elements.len()];
    let mut orbits = Vec::new();
    let mut count = 0u64;
    for start in 0..elements.len() {
        if seen[start] {
            continue;
        }
        let mut stab = 0usize;
        let mut orbit = Vec::new();
        for g in 0..omega_order {
            let img = act(g, &elements[start]);
            let idx = *index
                .get(&img)
                .ok_or_else(|| Error::Internal("action leaves the transporter".to_string()))?;
            if idx == start {
                stab += 1;
            }
            if !seen[idx] {
                seen[idx] = true;
                orbit.push(idx);
            }
        }
        if !omega_order.is_multiple_of(orbit.len()) || stab != omega_order / orbit.len() {
            return Err(Error::Internal(
                "orbit-stabilizer mismatch in the twisted action".to_string(),
            ));
        }
        count += stab as u64;
        orbits.push((orbit.len(), stab));
    }
    Ok(CountReport {
        count,
        omega_order,
        transporter_size: elements.len(),
        orbits,
        engine: "",
    })
}

/// Generic engine: enumerates the Weyl group (subject to the enumeration
/// cap) and works with explicit elements.
pub fn count_generic(datum: &RootDatum, chi: &CharParam, twist: &Twist) -> Result<CountReport> {
    let amb = Ambient::new(datum.clone(), enum_cap())?;
    let datum = &amb.datum;
    if phi_chi(datum, chi) != 0 {
        return Err(Error::Refusal(
            "counting requires a parameter with trivial small group".to_string(),
        ));
    }
    let (_, _, omega) = stabilizer_and_omega(&amb, chi, enum_cap())?;
    let echi = eps_act(datum, twist, chi)?;
    let dmat = delta_matrix(datum, twist)?;
    let r = datum.rank();
    let d_rat: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| Rational::from_integer(dmat[i * r + j]))
                .collect()
        })
        .collect();
    let d_inv_rat = rat_inverse(&d_rat)
        .ok_or_else(|| Error::Refusal("twist matrix is singular".to_string()))?;
    let conj = |mat: &[i64]| -> Result<Vec<i64>> {
        // D * mat * D^-1, integral because D normalizes the Weyl group.
        let mut out = vec![0i64; r * r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = Rational::zero();
                for k in 0..r {
                    for l in 0..r {
                        acc += Rational::from_integer(dmat[i * r + k])
                            * Rational::from_integer(mat[k * r + l])
                            * d_inv_rat[l][j];
                    }
                }
                if !acc.denom().eq(&1) {
                    return Err(Error::Internal(
                        "twist conjugate is not integral".to_string(),
                    ));
                }
                out[i * r + j] = *acc.numer();
            }
        }
        Ok(out)
    };
    // The twisted transporter: w with w . (eps chi) = chi.
    let transporter: Vec<_> = amb
        .weyl
        .elements
        .iter()
        .filter(|w| w_act(datum, w, &echi).key() == chi.key())
        .cloned()
        .collect();
    let eps_of: Vec<_> = omega
        .reps
        .iter()
        .map(|g| datum.elt_from_mat(conj(&g.mat)?))
        .collect::<Result<Vec<_>>>()?;
    let mut report = tally_orbits(&transporter, omega.order(), |g, b| {
        let ge = datum.inverse(&eps_of[g]);
        let gb = datum.mul(&omega.reps[g], b).expect("same datum");
        datum.mul(&gb, &ge).expect("same datum")
    })?;
    report.engine = "generic";
    Ok(report)
}

/// Type-A engine in one-line notation. A permutation `s` acts on value
/// vectors by `(s . v)_i = v_{s^-1(i)}`; the parameter corresponds to a
/// value vector up to a global additive constant.
fn count_type_a(datum: &RootDatum, chi: &CharParam, twist: &Twist) -> Result<CountReport> {
    let r = datum.rank();
    let n = r + 1;
    // Values: v_{n-1} = 0, v_i = v_{i+1} + chi_i.
    let mut v = vec![Rational::zero(); n];
    for i in (0..r).rev() {
        v[i] = mod1(v[i + 1] + chi.chi[i]);
    }
    let pos: HashMap<Rational, usize> = v.iter().cloned().zip(0..).collect();
    if pos.len() != n {
        return Err(Error::Refusal(
            "counting requires a parameter with trivial small group".to_string(),
        ));
    }
    let u = match twist.kind {
        TwistKind::Frobenius => Rational::from_integer(inv_mod(twist.q as i64, chi.order)?),
        TwistKind::Automorphism => Rational::from_integer(1),
    };
    let split = twist.is_split();
    // Twisted values: split v' = u v; reversal v'_i = -u v_{n-1-i}.
    let vprime: Vec<Rational> = (0..n)
        .map(|i| {
            if split {
                mod1(v[i] * u)
            } else {
                mod1(-v[n - 1 - i] * u)
            }
        })
        .collect();
    // All permutations s with s . src = v + c for some constant c.
    let shift_transporter = |src: &[Rational]| -> Vec<Vec<usize>> {
        let src_pos: HashMap<Rational, usize> = src.iter().cloned().zip(0..).collect();
        let mut out = Vec::new();
        for k in 0..n {
            let c = mod1(src[k] - v[0]);
            let mut s_inv = vec![0usize; n];
            let mut ok = true;
            for j in 0..n {
                match src_pos.get(&mod1(v[j] + c)) {
                    Some(&p) => s_inv[j] = p,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let mut s = vec![0usize; n];
                for (j, &p) in s_inv.iter().enumerate() {
                    s[p] = j;
                }
                out.push(s);
            }
        }
        out.sort();
        out.dedup();
        out
    };
    let omega = shift_transporter(&v);
    let transporter = shift_transporter(&vprime);
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
    let invert = |a: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize; n];
        for (i, &j) in a.iter().enumerate() {
            out[j] = i;
        }
        out
    };
    let rev: Vec<usize> = (0..n).rev().collect();
    let mut report = tally_orbits(&transporter, omega.len(), |g, b| {
        let gamma = &omega[g];
        let eps_gamma = if split {
            gamma.clone()
        } else {
            compose(&compose(&rev, gamma), &rev)
        };
        compose(&compose(gamma, b), &invert(&eps_gamma))
    })?;
    report.engine = "type-a";
    Ok(report)
}

/// The full orbit analysis of the twisted action on blocks: the blocks
/// from the twisted parameter back to the original, the sub-list whose
/// induced map preserves a chosen cell, the orbits of the twisted
/// conjugation `gamma . beta = gamma beta eps(gamma)^-1` of the
/// cell-preserving part of the component group, and the diagram
/// automorphism each block induces on the endoscopic simple system.
#[derive(Debug)]
pub struct OrbitReport {
    /// Minimal-element words of all blocks from the twisted parameter.
    pub block_words: Vec<String>,
    /// Indices (into `block_words`) of the cell-preserving blocks.
    pub cell_fixed: Vec<usize>,
    /// Orbits of the twisted conjugation, as lists of `block_words` indices.
    pub orbits: Vec<Vec<usize>>,
    /// Stabilizer order per orbit (parallel to `orbits`).
    pub stabilizer_orders: Vec<usize>,
    /// Order of the full component group.
    pub omega_order: usize,
    /// Order of the cell-preserving subgroup acting.
    pub omega_c_order: usize,
    /// Per cell-preserving block: the induced permutation of the
    /// endoscopic simple roots, rendered as `i->j` pairs (or `trivial`).
    pub sigma: Vec<String>,
    /// The fixed-representation count, when the small group is trivial.
    pub count: Option<u64>,
}

/// Computes the twisted block set, its cell-preserving part, and the
/// orbit/stabilizer decomposition under twisted conjugation. `cell` is the
/// member set of a two-sided cell of the small group, embedded in the
/// ambient Weyl group; pass the singleton identity cell when the small
/// group is trivial.
pub fn b_set(
    amb: &Ambient,
    chi: &CharParam,
    twist: &Twist,
    cell: &[crate::root_datum::WeylElt],
) -> Result<OrbitReport> {
    use crate::blocks::blocks;
    let d = &amb.datum;
    let echi = eps_act(d, twist, chi)?;
    // The twist must stabilize the parameter orbit.
    let orb = crate::char_param::orbit(d, chi, enum_cap())?;
    if orb.idx(&echi).is_none() {
        return Err(Error::Refusal(
            "the twist does not stabilize the parameter orbit".to_string(),
        ));
    }
    let bls = blocks(amb, chi, &echi)?;
    let (_, _, omega) = stabilizer_and_omega(amb, chi, enum_cap())?;
    let dmat = delta_matrix(d, twist)?;
    let r = d.rank();
    let d_rat: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| Rational::from_integer(dmat[i * r + j]))
                .collect()
        })
        .collect();
    let d_inv_rat = rat_inverse(&d_rat)
        .ok_or_else(|| Error::Refusal("twist matrix is singular".to_string()))?;
    let conj_mat = |mat: &[i64]| -> Result<Vec<i64>> {
        let mut out = vec![0i64; r * r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = Rational::zero();
                for k in 0..r {
                    for l in 0..r {
                        acc += Rational::from_integer(dmat[i * r + k])
                            * Rational::from_integer(mat[k * r + l])
                            * d_inv_rat[l][j];
                    }
                }
                if !acc.denom().eq(&1) {
                    return Err(Error::Internal(
                        "twist conjugate is not integral".to_string(),
                    ));
                }
                out[i * r + j] = *acc.numer();
            }
        }
        Ok(out)
    };
    let eps_w = |w: &crate::root_datum::WeylElt| -> Result<crate::root_datum::WeylElt> {
        d.elt_from_mat(conj_mat(&w.mat)?)
    };
    // Cell preservation: x -> w^beta eps(x) w^{beta,-1} maps the cell onto
    // itself.
    let cell_set: std::collections::HashSet<Vec<i64>> =
        cell.iter().map(|x| x.mat.clone()).collect();
    let preserves = |beta: &crate::blocks::Block| -> Result<bool> {
        for x in cell {
            let img = d.mul(&d.mul(&beta.w_min, &eps_w(x)?)?, &d.inverse(&beta.w_min))?;
            if !cell_set.contains(&img.mat) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut cell_fixed = Vec::new();
    for (bi, b) in bls.iter().enumerate() {
        if preserves(b)? {
            cell_fixed.push(bi);
        }
    }
    // The cell-preserving subgroup of the component group (conjugation by
    // minimal coset representatives).
    let mut omega_c = Vec::new();
    for (gi, g) in omega.reps.iter().enumerate() {
        let mut ok = true;
        for x in cell {
            let img = d.mul(&d.mul(g, x)?, &d.inverse(g))?;
            if !cell_set.contains(&img.mat) {
                ok = false;
                break;
            }
        }
        if ok {
            omega_c.push(gi);
        }
    }
    // Twisted conjugation on the cell-preserving blocks.
    let block_of_member = |w: &crate::root_datum::WeylElt| -> Result<usize> {
        for (bi, b) in bls.iter().enumerate() {
            if b.member_idx(w).is_ok() {
                return Ok(bi);
            }
        }
        Err(Error::Internal(
            "twisted conjugate leaves the block set".to_string(),
        ))
    };
    let ad = |gi: usize, bi: usize| -> Result<usize> {
        let g = &omega.reps[gi];
        let m = d.mul(&d.mul(g, &bls[bi].w_min)?, &d.inverse(&eps_w(g)?))?;
        block_of_member(&m)
    };
    let mut seen: std::collections::HashSet<usize> = std::collections::HashSet::new();
    let mut orbits = Vec::new();
    let mut stabilizer_orders = Vec::new();
    for &start in &cell_fixed {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut stab = 0usize;
        for &gi in &omega_c {
            let img = ad(gi, start)?;
            if img == start {
                stab += 1;
            }
            if seen.insert(img) {
                orbit.push(img);
            }
        }
        if !cell_fixed.contains(&orbit[0]) || omega_c.len() % orbit.len() != 0 {
            return Err(Error::Internal(
                "twisted action does not preserve the cell-fixed set".to_string(),
            ));
        }
        orbits.push(orbit);
        stabilizer_orders.push(stab);
    }
    // Diagram automorphism induced on the endoscopic simple system.
    let phi = phi_chi(d, chi);
    let sub = d.refl_subgroup(phi, enum_cap())?;
    let root_idx: HashMap<Vec<i64>, usize> = (0..2 * d.n_pos())
        .map(|i| (d.root(i).to_vec(), i))
        .collect();
    let mut sigma = Vec::new();
    for &bi in &cell_fixed {
        if sub.simples.is_empty() {
            sigma.push("trivial".to_string());
            continue;
        }
        // g = w^beta * D on the cocharacter side; roots move by g^-1 on
        // the right.
        let g_rat: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let mut acc = Rational::zero();
                        for k in 0..r {
                            acc += Rational::from_integer(
                                bls[bi].w_min.mat[i * r + k] * dmat[k * r + j],
                            );
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let g_inv = rat_inverse(&g_rat)
            .ok_or_else(|| Error::Internal("singular block twist matrix".to_string()))?;
        let mut pairs = Vec::new();
        let mut nontrivial = false;
        for (pos, &a) in sub.simples.iter().enumerate() {
            let mut img = vec![0i64; r];
            for (k, ik) in img.iter_mut().enumerate() {
                let mut acc = Rational::zero();
                for j in 0..r {
                    acc += Rational::from_integer(d.root(a)[j]) * g_inv[j][k];
                }
                if !acc.denom().eq(&1) {
                    return Err(Error::Internal("root image is not integral".to_string()));
                }
                *ik = *acc.numer();
            }
            let target = *root_idx
                .get(&img)
                .ok_or_else(|| Error::Internal("root image is not a root".to_string()))?;
            let tpos = sub
                .simples
                .iter()
                .position(|&s| s == target)
                .ok_or_else(|| {
                    Error::Internal("block twist does not preserve the simple system".to_string())
                })?;
            if tpos != pos {
                nontrivial = true;
            }
            pairs.push(format!("{}->{}", pos + 1, tpos + 1));
        }
        sigma.push(if nontrivial {
            pairs.join(",")
        } else {
            "trivial".to_string()
        });
    }
    let count = if phi == 0 {
        Some(stabilizer_orders.iter().map(|&s| s as u64).sum())
    } else {
        None
    };
    Ok(OrbitReport {
        block_words: bls.iter().map(|b| b.w_min.word_string()).collect(),
        cell_fixed,
        orbits,
        stabilizer_orders,
        omega_order: omega.order(),
        omega_c_order: omega_c.len(),
        sigma,
        count,
    })
}
