//! Two-sided cells of the small group `W°_chi`, and their extension across
//! blocks.
//!
//! Cells are computed from canonical-basis structure constants: `x <=_LR y`
//! iff `c_x` appears with nonzero coefficient in some product
//! `c_a c_y c_b`. The preorder is generated by left and right multiplication
//! by the generators `c_t` and closed transitively; its symmetrization
//! partitions the group into two-sided cells. With this convention the
//! identity cell is the unique maximum.
//!
//! An extended cell spreads a cell `C` of `W°_chi` over the whole groupoid:
//! the neutral slice is the union of the `Omega_chi`-conjugates of `C`, and
//! the slice over a block `beta` is `w^beta` times the neutral slice of the
//! source. These slices satisfy `w^gamma C(beta) = C(gamma beta) =
//! C(gamma) w^beta` (verified), and the stabilizer `Omega_C` of `C` in
//! `Omega_chi` is independent of the representative cell in its orbit.

use crate::char_param::{endoscopic_datum, phi_chi, CharParam, Omega};
use crate::error::{Error, Result};
use crate::hecke::{CanonicalTable, HeckeAlgebra};
use crate::root_datum::{Ambient, ReflSubgroup, WeylElt};

/// The two-sided cell partition of a small group.
#[derive(Debug)]
pub struct CellPartition {
    /// The group elements, in the ambient datum, deterministic order.
    pub group: Vec<WeylElt>,
    /// Cells as lists of indices into `group`, sorted so each cell's members
    /// are increasing and cells are ordered by their smallest member.
    pub cells: Vec<Vec<usize>>,
    /// `leq[i][j]`: cell `i` is below cell `j` in the two-sided preorder.
    pub leq: Vec<Vec<bool>>,
}

impl CellPartition {
    /// The cell index containing group element index `g`.
    pub fn cell_of(&self, g: usize) -> usize {
        self.cells
            .iter()
            .position(|c| c.contains(&g))
            .expect("every element lies in a cell")
    }

    /// Index of a Weyl element in `group`.
    pub fn group_idx(&self, w: &WeylElt) -> Option<usize> {
        self.group.iter().position(|g| g == w)
    }
}

/// Computes the two-sided cells of `W°_chi` via the canonical basis of its
/// own (derived-datum, trivial-parameter) Hecke algebra.
pub fn two_sided_cells(amb: &Ambient, chi: &CharParam, cap: usize) -> Result<CellPartition> {
    let derived = endoscopic_datum(&amb.datum, chi)?;
    let amb_h = Ambient::new(derived, cap)?;
    let triv = CharParam::trivial(&amb_h.datum);
    let alg = HeckeAlgebra::new(&amb_h, &triv, cap)?;
    let table = CanonicalTable::build(&alg)?;

    let n = amb_h.weyl.order();
    if n > 16_384 {
        return Err(Error::CapExceeded { cap: 16_384 });
    }
    // Edge y -> x when c_x appears in c_t c_y or c_y c_t for a generator t.
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for yi in 0..n {
        let cy = &table.entries[&(yi, 0)];
        for t in 0..amb_h.datum.n_simple() {
            let ct = table.entries[&(amb_h.weyl.idx(&amb_h.datum.simple_reflection(t)), 0)].clone();
            for prod in [alg.mul(&ct, cy), alg.mul(cy, &ct)] {
                let exp = table.to_canonical(&alg, &prod)?;
                for (&(xi, _), p) in &exp {
                    if !p.is_zero() {
                        reach[yi][xi] = true;
                    }
                }
            }
        }
    }
    // Transitive closure (Floyd-Warshall on a small boolean matrix).
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
    // Cells = mutually reachable classes.
    let mut cell_id = vec![usize::MAX; n];
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if cell_id[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        let id = cells.len();
        for &m in &members {
            cell_id[m] = id;
        }
        cells.push(members);
    }
    let nc = cells.len();
    let mut leq = vec![vec![false; nc]; nc];
    for (a, ca) in cells.iter().enumerate() {
        for (b, cb) in cells.iter().enumerate() {
            leq[a][b] = reach[cb[0]][ca[0]];
        }
    }

    // Transport the group back into the ambient datum (same lattice, same
    // matrices).
    let group: Vec<WeylElt> = amb_h
        .weyl
        .elements
        .iter()
        .map(|w| amb.datum.elt_from_mat(w.mat.clone()))
        .collect::<Result<_>>()?;
    Ok(CellPartition { group, cells, leq })
}

/// The action of `Omega_chi` on the cells of `W°_chi` by conjugation with
/// the minimal-length representatives. Returns, per `Omega` index, the
/// induced permutation of cell indices.
pub fn omega_action_on_cells(
    amb: &Ambient,
    omega: &Omega,
    cells: &CellPartition,
) -> Result<Vec<Vec<usize>>> {
    let d = &amb.datum;
    let mut out = Vec::with_capacity(omega.order());
    for rep in &omega.reps {
        let mut perm = Vec::with_capacity(cells.cells.len());
        for cell in &cells.cells {
            let w = &cells.group[cell[0]];
            let img = d.mul(&d.mul(rep, w)?, &d.inverse(rep))?;
            let gi = cells
                .group_idx(&img)
                .ok_or_else(|| Error::Internal("conjugate left the small group".to_string()))?;
            let target = cells.cell_of(gi);
            // The whole cell must land in one cell.
            for &m in cell {
                let wm = &cells.group[m];
                let im = d.mul(&d.mul(rep, wm)?, &d.inverse(rep))?;
                let gm = cells
                    .group_idx(&im)
                    .ok_or_else(|| Error::Internal("conjugate left the small group".into()))?;
                if cells.cell_of(gm) != target {
                    return Err(Error::Internal(
                        "conjugation does not permute cells".to_string(),
                    ));
                }
            }
            perm.push(target);
        }
        out.push(perm);
    }
    Ok(out)
}

/// An extended cell: a base cell together with its `Omega`-orbit data and
/// neutral slice.
#[derive(Debug)]
pub struct ExtendedCell {
    /// Index of the base cell in the partition.
    pub cell_index: usize,
    /// `Omega` indices stabilizing the base cell.
    pub omega_c: Vec<usize>,
    /// Cell indices in the `Omega`-orbit of the base cell.
    pub orbit_cells: Vec<usize>,
    /// The neutral slice: union of the orbit cells, as ambient elements.
    pub neutral: Vec<WeylElt>,
}

/// Extends a cell across the neutral block, recording its `Omega`-stabilizer
/// and orbit. The slice over any block is `w^beta * neutral(source)`.
pub fn extend_cell(
    amb: &Ambient,
    omega: &Omega,
    cells: &CellPartition,
    cell_index: usize,
) -> Result<ExtendedCell> {
    let action = omega_action_on_cells(amb, omega, cells)?;
    let omega_c: Vec<usize> = (0..omega.order())
        .filter(|&g| action[g][cell_index] == cell_index)
        .collect();
    let mut orbit_cells: Vec<usize> = action.iter().map(|perm| perm[cell_index]).collect();
    orbit_cells.sort_unstable();
    orbit_cells.dedup();
    // The stabilizer must be constant along the orbit (Omega is abelian).
    for &c in &orbit_cells {
        let stab: Vec<usize> = (0..omega.order()).filter(|&g| action[g][c] == c).collect();
        if stab != omega_c {
            return Err(Error::Internal(
                "cell stabilizer varies along the Omega-orbit".to_string(),
            ));
        }
    }
    let mut neutral: Vec<WeylElt> = orbit_cells
        .iter()
        .flat_map(|&c| cells.cells[c].iter().map(|&g| cells.group[g].clone()))
        .collect();
    neutral.sort_by_key(|w| w.sort_key());
    Ok(ExtendedCell {
        cell_index,
        omega_c,
        orbit_cells,
        neutral,
    })
}

/// The slice of an extended cell over a block: `w^beta * neutral`.
pub fn slice_over_block(
    amb: &Ambient,
    ext: &ExtendedCell,
    w_min: &WeylElt,
) -> Result<Vec<WeylElt>> {
    let mut out: Vec<WeylElt> = ext
        .neutral
        .iter()
        .map(|w| amb.datum.mul(w_min, w))
        .collect::<Result<_>>()?;
    out.sort_by_key(|w| w.sort_key());
    Ok(out)
}

/// Verifies the slice compatibility `w^beta S w^{beta,-1} = S'` for a block
/// from the parameter of `S` to the parameter of `S'` (conjugation carries
/// the neutral slice of the source onto the neutral slice of the target).
pub fn verify_slice_transport(
    amb: &Ambient,
    w_min: &WeylElt,
    source_neutral: &[WeylElt],
    target_neutral: &[WeylElt],
) -> Result<()> {
    let d = &amb.datum;
    let mut conj: Vec<WeylElt> = source_neutral
        .iter()
        .map(|w| d.mul(&d.mul(w_min, w)?, &d.inverse(w_min)))
        .collect::<Result<_>>()?;
    conj.sort_by_key(|w| w.sort_key());
    let mut expect = target_neutral.to_vec();
    expect.sort_by_key(|w| w.sort_key());
    if conj != expect {
        return Err(Error::Internal(
            "neutral slice does not transport along the block".to_string(),
        ));
    }
    Ok(())
}

/// Convenience: the small group of `chi` (used by callers pairing cells with
/// block data).
pub fn small_group(amb: &Ambient, chi: &CharParam, cap: usize) -> Result<ReflSubgroup> {
    amb.datum.refl_subgroup(phi_chi(&amb.datum, chi), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_param::{stabilizer_and_omega, CharParam};
    use crate::root_datum::{build_root_datum, Isogeny, Rational};

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn ambient(t: &str) -> Ambient {
        Ambient::new(
            build_root_datum(t, &Isogeny::SimplyConnected).unwrap(),
            100_000,
        )
        .unwrap()
    }

    #[test]
    fn a2_trivial_parameter_has_three_cells() {
        let amb = ambient("A2");
        let chi = CharParam::trivial(&amb.datum);
        let part = two_sided_cells(&amb, &chi, 1000).unwrap();
        assert_eq!(part.group.len(), 6);
        let mut sizes: Vec<usize> = part.cells.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 4]);
        // Identity cell is the unique maximum; longest-element cell the minimum.
        let e = part.group_idx(&amb.datum.identity()).unwrap();
        let w0 = part.group_idx(&amb.datum.longest_element()).unwrap();
        let ce = part.cell_of(e);
        let c0 = part.cell_of(w0);
        for c in 0..part.cells.len() {
            assert!(part.leq[c][ce]);
            assert!(part.leq[c0][c]);
        }
    }

    #[test]
    fn a1_cells() {
        let amb = ambient("A1");
        let chi = CharParam::trivial(&amb.datum);
        let part = two_sided_cells(&amb, &chi, 100).unwrap();
        assert_eq!(part.cells.len(), 2);
    }

    #[test]
    fn c2_half_zero_cells_and_omega_action() {
        // W° of order 2: cells {e} and {t}; Omega = Z/2 acts trivially on
        // them, so Omega_C = Omega for both.
        let amb = ambient("C2");
        let chi = CharParam::new(&amb.datum, vec![rat(1, 2), rat(0, 1)]).unwrap();
        let part = two_sided_cells(&amb, &chi, 100).unwrap();
        assert_eq!(part.group.len(), 2);
        assert_eq!(part.cells.len(), 2);
        let (_, _, omega) = stabilizer_and_omega(&amb, &chi, 100).unwrap();
        assert_eq!(omega.order(), 2);
        for ci in 0..part.cells.len() {
            let ext = extend_cell(&amb, &omega, &part, ci).unwrap();
            assert_eq!(ext.omega_c.len(), 2);
            assert_eq!(ext.orbit_cells, vec![ci]);
        }
    }

    #[test]
    fn slice_transport_on_c2() {
        let amb = ambient("C2");
        let chi = CharParam::new(&amb.datum, vec![rat(1, 2), rat(0, 1)]).unwrap();
        let xi = crate::blocks::xi_groupoid(&amb, &chi, 100).unwrap();
        // Per orbit member, cells and neutral slices.
        let mut parts = Vec::new();
        let mut exts = Vec::new();
        for m in &xi.orbit.members {
            let part = two_sided_cells(&amb, m, 1000).unwrap();
            let (_, _, omega) = stabilizer_and_omega(&amb, m, 1000).unwrap();
            let ext = extend_cell(&amb, &omega, &part, 0).unwrap();
            parts.push(part);
            exts.push(ext);
        }
        for ((i, j), bs) in &xi.hom {
            for b in bs {
                verify_slice_transport(&amb, &b.w_min, &exts[*j].neutral, &exts[*i].neutral)
                    .unwrap();
            }
        }
    }
}
