//! Command-line front end: configuration parsing, dispatch, and
//! deterministic structured-text report emission.
//!
//! Configuration is a TOML document:
//!
//! ```toml
//! cartan_type = "C2"
//! isogeny = "sc"            # or "adjoint", or a `lattice` array of rows
//! chi = ["1/2", "0"]        # exact fractions as strings
//!
//! [twist]                   # optional; used by `count`
//! kind = "split"            # split | unitary | frobenius | automorphism
//! q = 4
//! # delta = [2, 1]          # 1-based simple permutation (kind frobenius
//! #                           or automorphism); or "identity" / "reversal"
//! ```
//!
//! Every report embeds the artifact version and the SHA-256 of the raw
//! configuration bytes; identical configurations produce byte-identical
//! reports. Progress goes to standard error only. Exit codes: 0 success,
//! 1 mathematical refusal, 2 invalid input.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::blocks::{blocks, xi_groupoid};
use crate::cells::{extend_cell, omega_action_on_cells, two_sided_cells};
use crate::char_param::{endoscopic_datum, phi_chi, stabilizer_and_omega, CharParam};
use crate::error::{Error, Result};
use crate::frobenius::{b_set, count_torus_case, Twist, TwistKind};
use crate::hecke::{CanonicalTable, HeckeAlgebra};
use crate::root_datum::{build_root_datum, enum_cap, Ambient, Isogeny, Rational, RootDatum};
use crate::soergel::{bsl_character, bsl_rewrite};
use crate::tits::{cocycle_c, lambda_value, no_rebase, trivialize_class, TwistingData};
use crate::ARTIFACT_VERSION;

#[derive(Parser)]
#[command(
    name = "monodromic",
    version,
    about = "Exact block/Hecke/cocycle calculus"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Endoscopic datum, blocks, and component group for a parameter.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical basis table of the orbit Hecke algebra.
    Kl {
        #[arg(long)]
        config: PathBuf,
        /// Only emit entries of length at most this bound.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-sided cells of the small group and the component-group action.
    Cells {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Vertex 2-cocycle, scalar values, and a trivializing cochain.
    Cocycle {
        #[arg(long)]
        config: PathBuf,
        /// Field size (overrides the twist section).
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Twisted block orbits and the fixed-representation count.
    Count {
        #[arg(long)]
        config: PathBuf,
        /// Field size (overrides the twist section).
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Word rewrite against the parameter plus the product character.
    Bsl {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated generator word, e.g. `s1,s2,s1`.
        #[arg(long)]
        word: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(serde::Deserialize)]
struct TwistConfig {
    kind: String,
    q: Option<u64>,
    delta: Option<DeltaSpec>,
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum DeltaSpec {
    Named(String),
    Perm(Vec<usize>),
}

#[derive(serde::Deserialize)]
struct Config {
    cartan_type: String,
    isogeny: Option<String>,
    lattice: Option<Vec<Vec<String>>>,
    chi: Vec<String>,
    twist: Option<TwistConfig>,
}

fn parse_fraction(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidInput(format!("bad fraction {s:?} (expected \"a/b\" or \"a\")"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| bad())?;
        let den: i64 = b.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        Ok(Rational::new(num, den))
    } else {
        let num: i64 = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(num))
    }
}

struct Loaded {
    config: Config,
    sha: String,
    datum: RootDatum,
    chi: CharParam,
}

impl Loaded {
    /// Enumerates the ambient Weyl group (commands that need the full
    /// group call this; counting avoids it when a fast path applies).
    fn ambient(&self) -> Result<Ambient> {
        Ambient::new(self.datum.clone(), enum_cap())
    }
}

fn load(path: &PathBuf) -> Result<Loaded> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let sha = hex(&Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::InvalidInput("configuration is not UTF-8".to_string()))?;
    let config: Config = toml::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("configuration parse error: {e}")))?;
    let isogeny = match (&config.isogeny, &config.lattice) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidInput(
                "give either `isogeny` or `lattice`, not both".to_string(),
            ))
        }
        (None, Some(rows)) => {
            let parsed: Vec<Vec<Rational>> = rows
                .iter()
                .map(|row| row.iter().map(|s| parse_fraction(s)).collect())
                .collect::<Result<_>>()?;
            Isogeny::Custom(parsed)
        }
        (Some(name), None) => match name.as_str() {
            "sc" | "simply_connected" => Isogeny::SimplyConnected,
            "adjoint" => Isogeny::Adjoint,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown isogeny {other:?} (expected \"sc\" or \"adjoint\")"
                )))
            }
        },
        (None, None) => Isogeny::SimplyConnected,
    };
    let datum = build_root_datum(&config.cartan_type, &isogeny)?;
    let vals: Vec<Rational> = config
        .chi
        .iter()
        .map(|s| parse_fraction(s))
        .collect::<Result<_>>()?;
    if vals.len() != datum.rank() {
        return Err(Error::InvalidInput(format!(
            "chi has {} entries, expected the rank {}",
            vals.len(),
            datum.rank()
        )));
    }
    let chi = CharParam::new(&datum, vals)?;
    Ok(Loaded {
        config,
        sha,
        datum,
        chi,
    })
}

fn twist_from_config(loaded: &Loaded, q_flag: Option<u64>) -> Result<Twist> {
    let n = loaded.datum.n_simple();
    let tc = loaded.config.twist.as_ref();
    let kind_str = tc.map(|t| t.kind.as_str()).unwrap_or("split");
    let (kind, default_perm): (TwistKind, Vec<usize>) = match kind_str {
        "split" | "frobenius" => (TwistKind::Frobenius, (0..n).collect()),
        "unitary" => (TwistKind::Frobenius, (0..n).rev().collect()),
        "automorphism" => (TwistKind::Automorphism, (0..n).collect()),
        other => return Err(Error::InvalidInput(format!("unknown twist kind {other:?}"))),
    };
    let perm = match tc.and_then(|t| t.delta.as_ref()) {
        None => default_perm,
        Some(DeltaSpec::Named(name)) => match name.as_str() {
            "identity" => (0..n).collect(),
            "reversal" => (0..n).rev().collect(),
            other => {
                return Err(Error::InvalidInput(format!(
                "unknown delta {other:?} (expected \"identity\", \"reversal\", or a permutation)"
            )))
            }
        },
        Some(DeltaSpec::Perm(p)) => {
            // 1-based in the configuration.
            p.iter()
                .map(|&i| {
                    i.checked_sub(1)
                        .filter(|&j| j < n)
                        .ok_or_else(|| Error::InvalidInput("delta index out of range".to_string()))
                })
                .collect::<Result<_>>()?
        }
    };
    let q = match kind {
        TwistKind::Automorphism => 1,
        TwistKind::Frobenius => q_flag.or_else(|| tc.and_then(|t| t.q)).ok_or_else(|| {
            Error::InvalidInput("field size q is required (flag --q or twist.q)".to_string())
        })?,
    };
    Ok(Twist {
        kind,
        q,
        simple_perm: perm,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn header(report: &mut String, kind: &str, loaded: &Loaded) {
    let _ = writeln!(report, "# report: {kind}");
    let _ = writeln!(report, "# artifact: {ARTIFACT_VERSION}");
    let _ = writeln!(report, "# config-sha256: {}", loaded.sha);
    let _ = writeln!(report, "cartan_type = {}", loaded.config.cartan_type);
    let _ = writeln!(report, "chi = {}", loaded.chi.display());
    let _ = writeln!(report, "chi_order = {}", loaded.chi.order);
}

fn frac(x: &Rational) -> String {
    if x.denom() == &1 {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn cmd_analyze(loaded: &Loaded) -> Result<String> {
    let amb = loaded.ambient()?;
    let amb = &amb;
    let d = &amb.datum;
    let chi = &loaded.chi;
    let mut report = String::new();
    header(&mut report, "analyze", loaded);
    let bits = phi_chi(d, chi);
    let pos: Vec<String> = (0..d.n_pos())
        .filter(|i| bits & (1u128 << i) != 0)
        .map(|i| {
            d.root(i)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let _ = writeln!(report, "phi_chi_positive_count = {}", pos.len());
    let _ = writeln!(report, "phi_chi_positive = [{}]", pos.join("; "));
    let endo = endoscopic_datum(d, chi)?;
    let _ = writeln!(report, "endoscopic_type = {}", endo.label());
    let (w_chi, sub, omega) = stabilizer_and_omega(amb, chi, enum_cap())?;
    let _ = writeln!(report, "small_group_order = {}", sub.elements.len());
    let _ = writeln!(report, "stabilizer_order = {}", w_chi.len());
    let _ = writeln!(report, "omega_order = {}", omega.order());
    let _ = writeln!(
        report,
        "omega_reps = [{}]",
        omega
            .reps
            .iter()
            .map(|w| w.word_string())
            .collect::<Vec<_>>()
            .join("; ")
    );
    let vertex = blocks(amb, chi, chi)?;
    let _ = writeln!(report, "vertex_blocks = {}", vertex.len());
    for (i, b) in vertex.iter().enumerate() {
        let _ = writeln!(
            report,
            "block[{i}] w_min = {} ; w_max = {} ; size = {} ; ell_range = 0..{}",
            b.w_min.word_string(),
            b.w_max.word_string(),
            b.size(),
            b.ell.iter().max().copied().unwrap_or(0)
        );
    }
    let xi = xi_groupoid(amb, chi, enum_cap())?;
    let _ = writeln!(report, "orbit_size = {}", xi.orbit.len());
    Ok(report)
}

fn cmd_kl(loaded: &Loaded, depth: Option<u32>) -> Result<String> {
    let amb = loaded.ambient()?;
    let amb = &amb;
    let alg = HeckeAlgebra::new(amb, &loaded.chi, enum_cap())?;
    let table = CanonicalTable::build(&alg)?;
    let mut report = String::new();
    header(&mut report, "kl", loaded);
    let _ = writeln!(report, "orbit_size = {}", alg.orbit_len());
    for (&(wi, ci), elt) in &table.entries {
        if let Some(bound) = depth {
            if alg.len_of(wi) > bound {
                continue;
            }
        }
        let w = &amb.weyl.elements[wi];
        let terms: Vec<String> = elt
            .terms
            .iter()
            .map(|(&(yi, cj), p)| {
                format!(
                    "T[{}|{}]*({})",
                    amb.weyl.elements[yi].word_string(),
                    cj,
                    p.serialize()
                )
            })
            .collect();
        let _ = writeln!(
            report,
            "c[{}|{}] = {}",
            w.word_string(),
            ci,
            terms.join(" + ")
        );
    }
    Ok(report)
}

fn cmd_cells(loaded: &Loaded) -> Result<String> {
    let amb = loaded.ambient()?;
    let amb = &amb;
    let part = two_sided_cells(amb, &loaded.chi, enum_cap())?;
    let mut report = String::new();
    header(&mut report, "cells", loaded);
    let _ = writeln!(report, "small_group_order = {}", part.group.len());
    let _ = writeln!(report, "cell_count = {}", part.cells.len());
    for (i, cell) in part.cells.iter().enumerate() {
        let mut words: Vec<String> = cell.iter().map(|&g| part.group[g].word_string()).collect();
        words.sort();
        let _ = writeln!(report, "cell[{i}] = {{{}}}", words.join(", "));
    }
    let (_, _, omega) = stabilizer_and_omega(amb, &loaded.chi, enum_cap())?;
    let action = omega_action_on_cells(amb, &omega, &part)?;
    for (gi, row) in action.iter().enumerate() {
        let _ = writeln!(
            report,
            "omega[{gi}] cells -> [{}]",
            row.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    for ci in 0..part.cells.len() {
        let ext = extend_cell(amb, &omega, &part, ci)?;
        let _ = writeln!(
            report,
            "omega_c[cell {ci}] order = {} ; orbit = [{}]",
            ext.omega_c.len(),
            ext.orbit_cells
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    Ok(report)
}

fn cmd_cocycle(loaded: &Loaded, q_flag: Option<u64>) -> Result<String> {
    let amb = loaded.ambient()?;
    let amb = &amb;
    let chi = &loaded.chi;
    let q = match q_flag.or_else(|| loaded.config.twist.as_ref().and_then(|t| t.q)) {
        Some(q) => q,
        None => {
            return Err(Error::InvalidInput(
                "field size q is required (flag --q or twist.q)".to_string(),
            ))
        }
    };
    let (_, _, omega) = stabilizer_and_omega(amb, chi, enum_cap())?;
    let vertex = blocks(amb, chi, chi)?;
    let mut report = String::new();
    header(&mut report, "cocycle", loaded);
    let _ = writeln!(report, "q = {q}");
    let _ = writeln!(report, "omega_order = {}", omega.order());
    // Tabulate the 2-torsion cocycle on the vertex group.
    let block_of: Vec<_> = omega
        .reps
        .iter()
        .map(|r| {
            vertex
                .iter()
                .find(|b| &b.w_min == r)
                .ok_or_else(|| Error::Internal("missing vertex block".to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 0..omega.order() {
        for j in 0..omega.order() {
            let c = cocycle_c(amb, block_of[i], block_of[j], &no_rebase)?;
            let bits: Vec<String> = c.iter().map(|b| b.to_string()).collect();
            let lam = lambda_value(chi, q, &c)?;
            let _ = writeln!(
                report,
                "c[{i},{j}] = ({}) ; lambda = {}",
                bits.join(","),
                frac(&lam)
            );
        }
    }
    let data = TwistingData::build(amb, chi, &vertex, &omega, q, &no_rebase)?;
    let mu = trivialize_class(&omega, &data)?;
    for (i, m) in mu.iter().enumerate() {
        let _ = writeln!(report, "mu[{i}] = {}", frac(m));
    }
    let _ = writeln!(report, "trivialized = true");
    Ok(report)
}

/// Order of the finite Weyl group of a (possibly reducible) type label
/// such as `"C3"` or `"A1xA1"`; `None` if a factor is unrecognized.
fn weyl_order(label: &str) -> Option<u128> {
    let mut total: u128 = 1;
    for part in label.split('x') {
        let (fam, rank) = part.split_at(1);
        let n: u32 = rank.parse().ok()?;
        let fact = |k: u32| (1..=k as u128).product::<u128>();
        let factor = match (fam, n) {
            ("A", _) => fact(n + 1),
            ("B" | "C", _) => fact(n) << n,
            ("D", _) if n >= 2 => fact(n) << (n - 1),
            ("G", 2) => 12,
            ("F", 4) => 1152,
            ("E", 6) => 51_840,
            ("E", 7) => 2_903_040,
            ("E", 8) => 696_729_600,
            _ => return None,
        };
        total = total.checked_mul(factor)?;
    }
    Some(total)
}

fn cmd_count(loaded: &Loaded, q_flag: Option<u64>) -> Result<String> {
    let chi = &loaded.chi;
    let twist = twist_from_config(loaded, q_flag)?;
    let mut report = String::new();
    header(&mut report, "count", loaded);
    let _ = writeln!(report, "q = {}", twist.q);
    let _ = writeln!(
        report,
        "twist_kind = {}",
        match twist.kind {
            TwistKind::Frobenius =>
                if twist.is_split() {
                    "split"
                } else {
                    "twisted"
                },
            TwistKind::Automorphism => "automorphism",
        }
    );
    // Torus-case integer count (refuses when the small group is nontrivial).
    let torus = count_torus_case(&loaded.datum, chi, &twist)?;
    let _ = writeln!(report, "engine = {}", torus.engine);
    let _ = writeln!(report, "omega_order = {}", torus.omega_order);
    let _ = writeln!(report, "transporter_size = {}", torus.transporter_size);
    for (i, (size, stab)) in torus.orbits.iter().enumerate() {
        let _ = writeln!(report, "orbit[{i}] size = {size} ; stabilizer = {stab}");
    }
    let _ = writeln!(report, "count = {}", torus.count);
    // Full orbit report when the ambient group is enumerable. Predict the
    // group order from the type so we never start a doomed enumeration.
    let enumerable = weyl_order(loaded.datum.label())
        .map(|n| n <= enum_cap() as u128)
        .unwrap_or(false);
    if !enumerable {
        return Ok(report);
    }
    if let Ok(amb) = loaded.ambient() {
        if let Ok(full) = b_set(&amb, chi, &twist, &[amb.datum.identity()]) {
            let _ = writeln!(report, "blocks = {}", full.block_words.len());
            let _ = writeln!(report, "cell_fixed = {}", full.cell_fixed.len());
            for (i, s) in full.sigma.iter().enumerate() {
                let _ = writeln!(report, "sigma[{i}] = {s}");
            }
        }
    }
    Ok(report)
}

fn cmd_bsl(loaded: &Loaded, word: &str) -> Result<String> {
    let amb = loaded.ambient()?;
    let amb = &amb;
    let chi = &loaded.chi;
    let letters: Vec<usize> = word
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let s = s.trim();
            let t = s.strip_prefix('s').unwrap_or(s);
            t.parse::<usize>()
                .ok()
                .and_then(|i| i.checked_sub(1))
                .ok_or_else(|| Error::InvalidInput(format!("bad word letter {s:?}")))
        })
        .collect::<Result<_>>()?;
    let mut report = String::new();
    header(&mut report, "bsl", loaded);
    let _ = writeln!(
        report,
        "word = [{}]",
        letters
            .iter()
            .map(|i| format!("s{}", i + 1))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let data = bsl_rewrite(amb, chi, &letters)?;
    let _ = writeln!(report, "product = {}", data.product.word_string());
    let _ = writeln!(report, "w_min = {}", data.w_min.word_string());
    let _ = writeln!(report, "relative_length = {}", data.m());
    let _ = writeln!(
        report,
        "t_word = [{}]",
        data.ts
            .iter()
            .map(|t| t.word_string())
            .collect::<Vec<_>>()
            .join("; ")
    );
    let alg = HeckeAlgebra::new(amb, chi, enum_cap())?;
    let ci = alg
        .orbit
        .idx(chi)
        .ok_or_else(|| Error::Internal("parameter missing from its own orbit".to_string()))?;
    let elt = bsl_character(&alg, ci, &letters);
    for (&(wi, cj), p) in &elt.terms {
        let _ = writeln!(
            report,
            "character T[{}|{}] = {}",
            amb.weyl.elements[wi].word_string(),
            cj,
            p.serialize()
        );
    }
    Ok(report)
}

fn emit(report: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, report)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Analyze { config, out } => {
            let loaded = load(config)?;
            emit(&cmd_analyze(&loaded)?, out)
        }
        Cmd::Kl { config, depth, out } => {
            let loaded = load(config)?;
            emit(&cmd_kl(&loaded, *depth)?, out)
        }
        Cmd::Cells { config, out } => {
            let loaded = load(config)?;
            emit(&cmd_cells(&loaded)?, out)
        }
        Cmd::Cocycle { config, q, out } => {
            let loaded = load(config)?;
            emit(&cmd_cocycle(&loaded, *q)?, out)
        }
        Cmd::Count { config, q, out } => {
            let loaded = load(config)?;
            emit(&cmd_count(&loaded, *q)?, out)
        }
        Cmd::Bsl { config, word, out } => {
            let loaded = load(config)?;
            emit(&cmd_bsl(&loaded, word)?, out)
        }
    }
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Error::Refusal(msg)) => {
            eprintln!("refusal: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_parsing() {
        assert_eq!(parse_fraction("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_fraction(" -3 / 4 ").unwrap(), Rational::new(-3, 4));
        assert_eq!(parse_fraction("5").unwrap(), Rational::from_integer(5));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("a/b").is_err());
    }

    #[test]
    fn weyl_orders() {
        assert_eq!(weyl_order("A1"), Some(2));
        assert_eq!(weyl_order("A11"), Some(479_001_600));
        assert_eq!(weyl_order("C3"), Some(48));
        assert_eq!(weyl_order("G2"), Some(12));
        assert_eq!(weyl_order("A1xA1"), Some(4));
        assert_eq!(weyl_order("Z9"), None);
    }
}
