//! Rational character parameters on the cocharacter lattice and the
//! structures they cut out of the Weyl group.
//!
//! A [`CharParam`] is a homomorphism `chi` from the cocharacter lattice to
//! `Q/Z`, stored as a vector of rationals in `[0, 1)` against the fixed
//! cocharacter basis. From `chi` we derive:
//!
//! - the root subsystem `Phi_chi = { a : chi(a^vee) = 0 }` and the small
//!   group `W°_chi` it generates;
//! - the full stabilizer `W_chi` and the finite abelian quotient
//!   `Omega_chi = W_chi / W°_chi`, with minimal-length coset representatives;
//! - the derived (endoscopic) root datum: the same lattices with root system
//!   `Phi_chi`;
//! - the Weyl orbit of `chi`.

use crate::error::{Error, Result};
use crate::root_datum::{
    assemble_datum, classify_cartan, Ambient, Rational, ReflSubgroup, RootDatum, WeylElt,
};
use num::integer::lcm;
use num::traits::Zero;
use std::collections::HashMap;

/// A character parameter `chi : X_*(T) -> Q/Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharParam {
    pub(crate) datum: u64,
    /// Values on the cocharacter basis, normalized into `[0, 1)`.
    pub chi: Vec<Rational>,
    /// Order of `chi` in the character group: the lcm of the denominators.
    pub order: i64,
}

fn mod1(x: Rational) -> Rational {
    let d = *x.denom();
    let n = x.numer().rem_euclid(d);
    Rational::new(n, d)
}

impl CharParam {
    /// Builds a parameter from arbitrary rational values (reduced mod 1).
    pub fn new(datum: &RootDatum, vals: Vec<Rational>) -> Result<Self> {
        if vals.len() != datum.rank() {
            return Err(Error::InvalidInput(format!(
                "chi has {} entries, expected rank {}",
                vals.len(),
                datum.rank()
            )));
        }
        let chi: Vec<Rational> = vals.into_iter().map(mod1).collect();
        let order = chi.iter().fold(1i64, |acc, x| lcm(acc, *x.denom()));
        Ok(CharParam {
            datum: datum.id(),
            chi,
            order,
        })
    }

    /// The trivial parameter.
    pub fn trivial(datum: &RootDatum) -> Self {
        CharParam {
            datum: datum.id(),
            chi: vec![Rational::zero(); datum.rank()],
            order: 1,
        }
    }

    /// Evaluates `chi` on a cocharacter, in `Q/Z` (result in `[0,1)`).
    pub fn eval(&self, lam: &[i64]) -> Rational {
        let mut acc = Rational::zero();
        for (x, &l) in self.chi.iter().zip(lam.iter()) {
            acc += *x * Rational::from_integer(l);
        }
        mod1(acc)
    }

    /// Hashable exact key (numerator, denominator) per coordinate.
    pub fn key(&self) -> Vec<(i64, i64)> {
        self.chi.iter().map(|x| (*x.numer(), *x.denom())).collect()
    }

    /// Renders the values as `a/b` strings.
    pub fn display(&self) -> String {
        self.chi
            .iter()
            .map(|x| {
                if x.is_integer() {
                    format!("{}", x.numer())
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The Weyl action `(w . chi)(l) = chi(w^-1 l)`.
pub fn w_act(datum: &RootDatum, w: &WeylElt, chi: &CharParam) -> CharParam {
    assert_eq!(chi.datum, datum.id(), "parameter from a different datum");
    assert_eq!(w.datum, datum.id(), "element from a different datum");
    let r = datum.rank();
    // (w.chi)(e_k) = chi(w^-1 e_k) = sum_j (w.inv)[j][k] chi_j.
    let mut out = vec![Rational::zero(); r];
    for j in 0..r {
        if chi.chi[j].is_zero() {
            continue;
        }
        for (k, o) in out.iter_mut().enumerate() {
            *o += Rational::from_integer(w.inv[j * r + k]) * chi.chi[j];
        }
    }
    CharParam::new(datum, out).expect("dimension preserved")
}

/// Bitset over positive roots: `Phi_chi^+ = { a > 0 : chi(a^vee) = 0 }`.
pub fn phi_chi(datum: &RootDatum, chi: &CharParam) -> u128 {
    let mut bits = 0u128;
    for i in 0..datum.n_pos() {
        if chi.eval(datum.coroot(i)).is_zero() {
            bits |= 1u128 << i;
        }
    }
    bits
}

/// The small group `W°_chi`, generated by the reflections in `Phi_chi`.
pub fn w_circ(datum: &RootDatum, chi: &CharParam, cap: usize) -> Result<ReflSubgroup> {
    datum.refl_subgroup(phi_chi(datum, chi), cap)
}

/// The finite abelian component group `Omega_chi = W_chi / W°_chi`, with
/// minimal-length representatives (index 0 is the identity coset).
#[derive(Debug, Clone)]
pub struct Omega {
    /// Minimal-length coset representatives; `reps[0]` is the identity.
    pub reps: Vec<WeylElt>,
    /// Multiplication table: `table[i][j]` is the coset of `reps[i]*reps[j]`.
    pub table: Vec<Vec<usize>>,
    /// Inverse table.
    pub inv: Vec<usize>,
}

impl Omega {
    /// Group order.
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Composes two coset indices.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    /// A minimal generating set (greedy closure over the index set).
    pub fn generators(&self) -> Vec<usize> {
        let n = self.order();
        let mut generated = vec![false; n];
        generated[0] = true;
        let mut gens = Vec::new();
        for g in 1..n {
            if generated[g] {
                continue;
            }
            gens.push(g);
            // Close under the new generator.
            loop {
                let mut grew = false;
                for i in 0..n {
                    if generated[i] {
                        let k = self.table[g][i];
                        if !generated[k] {
                            generated[k] = true;
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
        }
        gens
    }
}

/// Computes the full stabilizer `W_chi` and the quotient `Omega_chi`.
///
/// Enumerates over the ambient Weyl group, so the ambient context must have
/// been built. Verifies that `W°_chi` is normal in `W_chi`, that each coset
/// has a unique minimal-length member, and that the quotient is abelian.
pub fn stabilizer_and_omega(
    amb: &Ambient,
    chi: &CharParam,
    cap: usize,
) -> Result<(Vec<WeylElt>, ReflSubgroup, Omega)> {
    let datum = &amb.datum;
    let sub = w_circ(datum, chi, cap)?;
    let mut stab: Vec<WeylElt> = amb
        .weyl
        .elements
        .iter()
        .filter(|w| w_act(datum, w, chi) == *chi)
        .cloned()
        .collect();
    stab.sort_by_key(|w| w.sort_key());

    // W° must be inside the stabilizer.
    for g in &sub.gens {
        if w_act(datum, g, chi) != *chi {
            return Err(Error::Internal(
                "reflection subgroup does not stabilize the parameter".to_string(),
            ));
        }
    }

    // Partition into cosets W° w; stab is sorted by length, so the first
    // member seen in each coset is a minimal-length representative.
    let mut reps: Vec<WeylElt> = Vec::new();
    let mut coset_of: HashMap<Vec<i64>, usize> = HashMap::new();
    for w in &stab {
        let mut found = None;
        for (c, r) in reps.iter().enumerate() {
            // w in W° r iff w r^-1 in W°.
            let t = datum.mul(w, &datum.inverse(r))?;
            if datum.sub_contains(&sub, &t) {
                found = Some(c);
                break;
            }
        }
        let c = match found {
            Some(c) => c,
            None => {
                reps.push(w.clone());
                reps.len() - 1
            }
        };
        coset_of.insert(w.mat.clone(), c);
    }
    // Unique minimal-length member per coset.
    for (c, r) in reps.iter().enumerate() {
        let ties = stab
            .iter()
            .filter(|w| coset_of[&w.mat] == c && w.len == r.len)
            .count();
        if ties != 1 {
            return Err(Error::Internal(
                "coset has a non-unique minimal-length element".to_string(),
            ));
        }
    }
    if reps.is_empty() || reps[0].len != 0 {
        return Err(Error::Internal(
            "identity coset must come first".to_string(),
        ));
    }
    // Normality: conjugation by each rep preserves W°'s root set.
    for r in reps.iter() {
        for &s in sub.simples.iter() {
            let img = datum.act_root(r, s);
            let img_pos = if datum.is_positive(img) {
                img
            } else {
                datum.neg_of(img)
            };
            if sub.phi_pos >> img_pos & 1 == 0 {
                return Err(Error::Internal(
                    "small group is not normal in the stabilizer".to_string(),
                ));
            }
        }
    }
    // Multiplication and inverse tables.
    let n = reps.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = datum.mul(&reps[i], &reps[j])?;
            table[i][j] = *coset_of
                .get(&p.mat)
                .ok_or_else(|| Error::Internal("coset product left the stabilizer".into()))?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if table[i][j] != table[j][i] {
                return Err(Error::Internal(
                    "component group is not abelian".to_string(),
                ));
            }
        }
    }
    let inv: Vec<usize> = (0..n)
        .map(|i| (0..n).position(|j| table[i][j] == 0).unwrap())
        .collect();
    let omega = Omega { reps, table, inv };
    Ok((stab, sub, omega))
}

/// The derived (endoscopic) root datum: same lattices, root system `Phi_chi`.
/// Its label classifies the Cartan type of the subsystem.
pub fn endoscopic_datum(datum: &RootDatum, chi: &CharParam) -> Result<RootDatum> {
    let bits = phi_chi(datum, chi);
    // Reuse the subgroup machinery to find the simple system (validated there).
    let sub = datum.refl_subgroup(bits, crate::root_datum::enum_cap())?;
    let simple_roots: Vec<Vec<i64>> = sub
        .simples
        .iter()
        .map(|&i| datum.root(i).to_vec())
        .collect();
    let simple_coroots: Vec<Vec<i64>> = sub
        .simples
        .iter()
        .map(|&i| datum.coroot(i).to_vec())
        .collect();
    let m = sub.simples.len();
    let cartan: Vec<Vec<i64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| datum.pairing(sub.simples[i], sub.simples[j]))
                .collect()
        })
        .collect();
    let label = classify_cartan(&cartan)?;
    let derived = assemble_datum(label, datum.rank(), simple_roots, simple_coroots)?;
    // Sanity: the derived positive roots are exactly Phi_chi^+.
    let expected: usize = bits.count_ones() as usize;
    if derived.n_pos() != expected {
        return Err(Error::Internal(format!(
            "derived datum has {} positive roots, expected {}",
            derived.n_pos(),
            expected
        )));
    }
    Ok(derived)
}

/// The Weyl orbit of a parameter, in deterministic order.
#[derive(Debug, Clone)]
pub struct OrbitData {
    /// Orbit members sorted by exact key.
    pub members: Vec<CharParam>,
    index: HashMap<Vec<(i64, i64)>, usize>,
}

impl OrbitData {
    /// Orbit size.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// True iff the orbit is empty (never for a valid orbit).
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of a parameter in the orbit.
    pub fn idx(&self, chi: &CharParam) -> Option<usize> {
        self.index.get(&chi.key()).copied()
    }
}

/// Enumerates the orbit of `chi` under the simple reflections.
pub fn orbit(datum: &RootDatum, chi: &CharParam, cap: usize) -> Result<OrbitData> {
    let mut members = vec![chi.clone()];
    let mut index: HashMap<Vec<(i64, i64)>, usize> = HashMap::new();
    index.insert(chi.key(), 0);
    let mut head = 0usize;
    while head < members.len() {
        let cur = members[head].clone();
        head += 1;
        for i in 0..datum.n_simple() {
            let s = datum.simple_reflection(i);
            let next = w_act(datum, &s, &cur);
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(next.key()) {
                if members.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                e.insert(members.len());
                members.push(next);
            }
        }
    }
    members.sort_by_key(|c| c.key());
    let index = members
        .iter()
        .enumerate()
        .map(|(i, c)| (c.key(), i))
        .collect();
    Ok(OrbitData { members, index })
}

/// Checks compatibility of `q` with the parameter's order `N`.
///
/// Requires `gcd(N, q) = 1` (hard error); additionally warns when `N` does
/// not divide `q - 1`, i.e. when the values of `chi` do not all live in the
/// `(q-1)`-torsion.
pub fn q_compat(chi: &CharParam, q: u64) -> Result<Option<String>> {
    let n = chi.order as u64;
    if num::integer::gcd(n, q) != 1 {
        return Err(Error::BadQ {
            q,
            reason: format!("gcd(order {n}, q) != 1"),
        });
    }
    if n != 0 && !(q - 1).is_multiple_of(n) {
        return Ok(Some(format!(
            "warning: parameter order {n} does not divide q-1 = {}",
            q - 1
        )));
    }
    Ok(None)
}
