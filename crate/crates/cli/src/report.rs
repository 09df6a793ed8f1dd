//! Machine- and human-readable reports. Every number is an exact rational string.

use std::fmt::Write as _;

use opfamily::{Mat, MatLaurent, MatSeries, Rat, Stage};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::spec::{column_list, grid};

pub type Grid = Vec<Vec<String>>;

#[derive(Clone, Debug, Serialize)]
pub struct Coefficient {
    pub power: isize,
    pub matrix: Grid,
}

/// Nonzero coefficients of a series or Laurent series, known exactly through `ε^order`.
#[derive(Clone, Debug, Serialize)]
pub struct Listing {
    pub order: isize,
    pub rows: usize,
    pub cols: usize,
    pub coefficients: Vec<Coefficient>,
}

impl Listing {
    pub fn from_series(s: &MatSeries, shift: isize) -> Self {
        let (rows, cols) = s.shape();
        let coefficients = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Coefficient { power: i as isize + shift, matrix: grid(c) })
            .collect();
        Listing { order: s.trunc_order() as isize + shift, rows, cols, coefficients }
    }

    pub fn from_laurent(s: &MatLaurent) -> Self {
        let (rows, cols) = s.shape();
        let low = -(s.pole_order() as isize);
        let coefficients = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Coefficient { power: i as isize + low, matrix: grid(c) })
            .collect();
        Listing { order: s.trunc_order(), rows, cols, coefficients }
    }

    pub fn from_terms(terms: &[(isize, Mat)], rows: usize, cols: usize, order: isize) -> Self {
        let coefficients = terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| Coefficient { power: *p, matrix: grid(c) })
            .collect();
        Listing { order, rows, cols, coefficients }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub index: usize,
    pub dim_nc: usize,
    pub dim_n: usize,
    pub dim_r: usize,
    pub dim_rc: usize,
    /// Basis vectors, one list per vector.
    pub nc: Grid,
    pub n: Grid,
    pub r: Grid,
    pub rc: Grid,
}

impl StageReport {
    pub fn new(st: &Stage<Rat>) -> Self {
        StageReport {
            index: st.index,
            dim_nc: st.nc.dim(),
            dim_n: st.n.dim(),
            dim_r: st.r.dim(),
            dim_rc: st.rc.dim(),
            nc: column_list(st.nc.basis()),
            n: column_list(st.n.basis()),
            r: column_list(st.r.basis()),
            rc: column_list(st.rc.basis()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InverseReport {
    pub pole_order: usize,
    pub coefficients: Listing,
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanReport {
    pub length: usize,
    pub kernel_dims: Vec<usize>,
    pub dimension: usize,
    /// Block upper-triangular generator `(M_{a,b})`.
    pub generator: Grid,
    /// Stacked chains `(b_{l−1}; …; b_0)`, one list per chain.
    pub chains: Grid,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmithReport {
    pub sp: Grid,
    pub p: Listing,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearizationReport {
    pub degree: usize,
    pub k: usize,
    pub k_bar: usize,
    pub lbar0: Grid,
    pub lbar1: Grid,
}

/// One exact check that was actually executed.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub declared_pole: usize,
    pub generic_rank: usize,
    pub k: usize,
    pub stages: Vec<StageReport>,
    pub smith_exponents: Vec<isize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Listing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Listing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Listing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse: Option<InverseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jordan: Option<JordanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smith: Option<SmithReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linearization: Option<LinearizationReport>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(
            out,
            "family: {}x{}, declared pole {}, generic rank {}",
            self.rows, self.cols, self.declared_pole, self.generic_rank
        );
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "stage  dim Nc  dim N  dim R  dim Rc");
        for st in &self.stages {
            let _ = writeln!(out, "{:>5}  {:>6}  {:>5}  {:>5}  {:>6}", st.index, st.dim_nc, st.dim_n, st.dim_r, st.dim_rc);
        }
        let exps: Vec<String> = self.smith_exponents.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "Smith exponents: {}", exps.join(" "));
        for (name, listing) in [("Δ(ε)", &self.delta), ("φ(ε)", &self.phi), ("ψ(ε)", &self.psi)] {
            if let Some(l) = listing {
                write_listing(&mut out, name, l);
            }
        }
        if let Some(inv) = &self.inverse {
            let _ = writeln!(out, "pole order of L⁺: {}", inv.pole_order);
            write_listing(&mut out, "L⁺(ε)", &inv.coefficients);
        }
        if let Some(s) = &self.smith {
            let _ = writeln!(out, "S_P:");
            write_grid(&mut out, &s.sp);
            write_listing(&mut out, "P(ε)", &s.p);
        }
        if let Some(j) = &self.jordan {
            let _ = writeln!(out, "Jordan chains of length {}: dimension {} (kernel dims {:?})", j.length, j.dimension, j.kernel_dims);
            for chain in &j.chains {
                let _ = writeln!(out, "  [{}]", chain.join(", "));
            }
        }
        if let Some(l) = &self.linearization {
            let _ = writeln!(out, "linearization: degree {}, k = {}, k̄ = {}", l.degree, l.k, l.k_bar);
            let _ = writeln!(out, "L̄0:");
            write_grid(&mut out, &l.lbar0);
            let _ = writeln!(out, "L̄1:");
            write_grid(&mut out, &l.lbar1);
        }
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let _ = writeln!(out, "  [{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

fn write_grid(out: &mut String, g: &Grid) {
    let width = g.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(0);
    for row in g {
        let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        let _ = writeln!(out, "  [{}]", cells.join(", "));
    }
}

fn write_listing(out: &mut String, name: &str, l: &Listing) {
    let _ = writeln!(out, "{name} through ε^{}:", l.order);
    let cells: Vec<Vec<String>> = (0..l.rows)
        .map(|i| {
            (0..l.cols)
                .map(|j| {
                    let terms: Vec<(isize, Rat)> = l
                        .coefficients
                        .iter()
                        .filter_map(|c| {
                            let v: Rat = c.matrix[i][j].parse().expect("report entries are canonical rationals");
                            (!v.is_zero()).then_some((c.power, v))
                        })
                        .collect();
                    epsilon_polynomial(&terms)
                })
                .collect()
        })
        .collect();
    write_grid(out, &cells);
}

fn power_text(p: isize) -> String {
    match p {
        0 => String::new(),
        1 => "ε".into(),
        _ => format!("ε^{p}"),
    }
}

/// `Σ c_p ε^p` in increasing powers, e.g. `1 - ε^3 + 1/2·ε^4`.
pub fn epsilon_polynomial(terms: &[(isize, Rat)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (p, c)) in terms.iter().enumerate() {
        let negative = *c < Rat::zero();
        let abs = if negative { -c.clone() } else { c.clone() };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let pw = power_text(*p);
        if pw.is_empty() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&pw);
        } else {
            let _ = write!(out, "{abs}·{pw}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn polynomial_rendering() {
        assert_eq!(epsilon_polynomial(&[]), "0");
        assert_eq!(epsilon_polynomial(&[(0, r(1, 1)), (3, r(-1, 1)), (4, r(1, 2))]), "1 - ε^3 + 1/2·ε^4");
        assert_eq!(epsilon_polynomial(&[(-3, r(-1, 1)), (1, r(2, 1))]), "-ε^-3 + 2·ε");
    }
}
