//! Word calculus: rewriting generator words against a running parameter,
//! and the characters of the associated singular Bott-Samelson-style
//! products in the orbit Hecke algebra.
//!
//! Reading a reduced word `s_{i_1} ... s_{i_k}` from the right with a
//! running parameter, each letter either lies in the small group of the
//! current parameter (a "small" letter) or not. Small letters transport to
//! reflections of the source small group; the remaining letters assemble
//! the minimal element of the block of the full product. The number of
//! small letters equals the relative length of the product in its block.

use crate::blocks::ell_beta_letter_count;
use crate::char_param::{phi_chi, w_act, CharParam};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElt};
use crate::laurent::LaurentPoly;
use crate::root_datum::{Ambient, WeylElt};
use num::traits::Zero;

/// Result of rewriting a reduced word against a parameter.
#[derive(Debug)]
pub struct BslData {
    /// The minimal element of the block containing the word's product.
    pub w_min: WeylElt,
    /// Transported reflections of the source small group, in word order;
    /// their ordered product is the relative part of the product.
    pub ts: Vec<WeylElt>,
    /// The full product of the word.
    pub product: WeylElt,
}

impl BslData {
    /// The relative length of the product: the number of small letters.
    pub fn m(&self) -> usize {
        self.ts.len()
    }
}

/// Rewrites a reduced word, read with the running parameter starting at
/// `chi` on the right. Errors with [`Error::NotReduced`] if the word is not
/// reduced.
pub fn bsl_rewrite(amb: &Ambient, chi: &CharParam, word: &[usize]) -> Result<BslData> {
    let d = &amb.datum;
    let phi = phi_chi(d, chi);
    let mut x = d.identity(); // suffix product
    let mut w = d.identity(); // minimal part of the suffix's block
    let mut ts_rev: Vec<WeylElt> = Vec::new();
    for &i in word.iter().rev() {
        if i >= d.n_simple() {
            return Err(Error::InvalidInput(format!(
                "generator index {i} out of range"
            )));
        }
        let s = d.simple_reflection(i);
        let sx = d.mul(&s, &x)?;
        if sx.len <= x.len {
            return Err(Error::NotReduced);
        }
        // The running parameter is the target of the suffix block: x . chi,
        // which equals w . chi.
        let running = w_act(d, &w, chi);
        if running.eval(d.coroot(i)).is_zero() {
            // Small letter: transports to a source-side reflection, the
            // minimal part is unchanged.
            let t = d.mul(&d.mul(&d.inverse(&w), &s)?, &w)?;
            ts_rev.push(t);
        } else {
            // The minimal part absorbs the letter and stays minimal.
            w = d.mul(&s, &w)?;
            for b in 0..d.n_pos() {
                if phi & (1u128 << b) != 0 && !d.is_positive(d.act_root(&w, b)) {
                    return Err(Error::Internal(
                        "rewrite lost minimality of the block part".to_string(),
                    ));
                }
            }
        }
        x = sx;
    }
    ts_rev.reverse();
    // Reconstruction check: w * (product of ts) = x.
    let mut y = d.identity();
    for t in &ts_rev {
        y = d.mul(&y, t)?;
    }
    if d.mul(&w, &y)? != x {
        return Err(Error::Internal("rewrite does not reconstruct".to_string()));
    }
    // Letter-count cross-check.
    let word_u8: Vec<u8> = word.iter().map(|&i| i as u8).collect();
    if ell_beta_letter_count(amb, chi, &word_u8)? as usize != ts_rev.len() {
        return Err(Error::Internal("relative length mismatch".to_string()));
    }
    Ok(BslData {
        w_min: w,
        ts: ts_rev,
        product: x,
    })
}

/// The character of the singular Bott-Samelson-style product attached to a
/// word, as an element of the orbit Hecke algebra: the right-to-left
/// product of the factors `c_{s} = Tt_s + [s small] v^{-1}` applied to the
/// idempotent of the orbit member with index `ci`.
pub fn bsl_character(alg: &HeckeAlgebra, ci: usize, word: &[usize]) -> HeckeElt {
    let vm1 = LaurentPoly::v_pow(-1);
    let mut x = alg.idempotent(ci);
    for &i in word.iter().rev() {
        let mut proj = HeckeElt::zero();
        for (&(wi, cj), p) in &x.terms {
            if alg.s_in_circ_at(i, wi, cj) {
                proj.add_term((wi, cj), p);
            }
        }
        x = alg.left_mul_ts(i, &x).add(&proj).scale(&vm1);
    }
    x
}
