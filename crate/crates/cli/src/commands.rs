use opfamily::oracles::{det_polynomial, direct_laurent_inverse, linearize_polynomial, toeplitz_nullspace};
use opfamily::{
    diagonalize, ComplementStrategy, Diagonalization, FamilyKind, Mat, MatFamily, MatLaurent, MatSeries, Options, Rat,
    Recursion, Subspace,
};

use crate::error::CliError;
use crate::report::{Check, InverseReport, JordanReport, LinearizationReport, Listing, Report, SmithReport, StageReport};
use crate::spec::{column_list, grid, FamilySpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Diagonalize,
    Invert,
    Jordan { length: usize },
    Smith,
    Linearize,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Diagonalize => "diagonalize",
            Command::Invert => "invert",
            Command::Jordan { .. } => "jordan",
            Command::Smith => "smith",
            Command::Linearize => "linearize",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub order: Option<usize>,
    pub max_stages: Option<usize>,
    pub strategy: ComplementStrategy<Rat>,
}

pub fn run_command(command: Command, spec: &FamilySpec, flags: &Flags) -> Result<Report, CliError> {
    let family = spec.to_family();
    match command {
        Command::Analyze => analyze(spec, &family, flags),
        Command::Diagonalize => {
            let d = diagonalize_family(&family, flags)?;
            let mut report = base_report(command, spec, d.recursion(), d.k());
            add_transformations(&mut report, &d, spec);
            report.checks.push(residual_check(&d)?);
            report.checks.push(triangularization_check(&d)?);
            Ok(report)
        }
        Command::Invert => invert(spec, &family, flags),
        Command::Jordan { length } => jordan(spec, &family, flags, length),
        Command::Smith => {
            let d = diagonalize_family(&family, flags)?;
            let mut report = base_report(command, spec, d.recursion(), d.k());
            let sf = d.smith_factorize()?;
            let n = family.shape().1;
            let terms: Vec<(isize, Mat)> = sf.p_terms.iter().map(|(p, m)| (*p as isize, m.clone())).collect();
            let degree = d.k() as isize;
            report.smith = Some(SmithReport { sp: grid(&sf.sp), p: Listing::from_terms(&terms, n, n, degree) });
            report.checks.extend(smith_checks(&d)?);
            Ok(report)
        }
        Command::Linearize => linearize(spec, &family, flags),
        Command::Verify => verify(spec, &family, flags),
    }
}

fn diagonalize_family(family: &MatFamily, flags: &Flags) -> Result<Diagonalization<Rat>, CliError> {
    let options = Options { order: flags.order, max_stages: flags.max_stages, strategy: flags.strategy.clone() };
    Ok(diagonalize(family, options)?)
}

fn stabilized(family: &MatFamily, flags: &Flags) -> Result<(Recursion<Rat>, usize), CliError> {
    let mut rec = Recursion::new(family.clone(), flags.strategy.clone())?;
    let k = rec.stabilize(flags.max_stages)?;
    Ok((rec, k))
}

fn base_report(command: Command, spec: &FamilySpec, rec: &Recursion<Rat>, k: usize) -> Report {
    let stages = &rec.decomposition().stages()[..=k];
    let p = spec.declared_pole as isize;
    let smith_exponents = stages
        .iter()
        .flat_map(|st| std::iter::repeat(st.index as isize - 1 - p).take(st.nc.dim()))
        .collect();
    Report {
        command: command.name(),
        rows: spec.rows,
        cols: spec.cols,
        declared_pole: spec.declared_pole,
        generic_rank: rec.generic_rank(),
        k,
        stages: stages.iter().map(StageReport::new).collect(),
        smith_exponents,
        delta: None,
        phi: None,
        psi: None,
        inverse: None,
        jordan: None,
        smith: None,
        linearization: None,
        checks: Vec::new(),
        notes: Vec::new(),
    }
}

fn add_transformations(report: &mut Report, d: &Diagonalization<Rat>, spec: &FamilySpec) {
    report.delta = Some(Listing::from_series(&d.delta_series(d.order()), -(spec.declared_pole as isize)));
    report.phi = Some(Listing::from_series(d.phi(), 0));
    report.psi = Some(Listing::from_series(d.psi(), 0));
}

fn analyze(spec: &FamilySpec, family: &MatFamily, flags: &Flags) -> Result<Report, CliError> {
    let (rec, k) = stabilized(family, flags)?;
    let mut report = base_report(Command::Analyze, spec, &rec, k);
    let dec = rec.decomposition();
    report.checks.push(Check::new(
        "stabilization certificate",
        dec.range_rank() == rec.generic_rank(),
        format!("Σ dim R_i = {} equals the generic rank {}", dec.range_rank(), rec.generic_rank()),
    ));
    report.checks.push(chain_identity_check(&rec));
    Ok(report)
}

fn chain_identity_check(rec: &Recursion<Rat>) -> Check {
    let bad: Vec<usize> = (1..=rec.stages()).filter(|&j| !rec.chain_identity_holds(j)).collect();
    Check::new("chain identity", bad.is_empty(), format!("Σ L_v M_{{v+1,j}} = S_j at stages 1..={}; failing {bad:?}", rec.stages()))
}

fn residual_check(d: &Diagonalization<Rat>) -> Result<Check, CliError> {
    let failure = d.residual_failure()?;
    Ok(Check::new(
        "diagonalization residual",
        failure.is_none(),
        match failure {
            None => format!("ψ⁻¹ L φ − Δ = 0 through ε^{}", d.order()),
            Some(o) => format!("first nonzero coefficient at ε^{o}"),
        },
    ))
}

fn triangularization_check(d: &Diagonalization<Rat>) -> Result<Check, CliError> {
    Ok(Check::new("triangularization", d.triangularization_holds()?, format!("L φ = Σ ε^i S_{{i+1}} through ε^{}", d.order())))
}

/// Largest order through which `L L⁺ L` and `L⁺ L L⁺` are determined by the known coefficients.
fn axiom_order(d: &Diagonalization<Rat>, wanted: usize) -> Option<usize> {
    match d.family().known_order() {
        None => Some(wanted),
        Some(t) => t.checked_sub(2 * d.k()).map(|cap| cap.min(wanted)),
    }
}

fn inverse_axiom_checks(d: &Diagonalization<Rat>, order: usize) -> Result<Vec<Check>, CliError> {
    let k = d.k();
    let x = d.generalized_inverse(order + k)?;
    let l_order = match d.family().known_order() {
        Some(t) => t,
        None => order + 2 * k + 1,
    };
    let l = MatLaurent::from_series(&d.family().series(l_order)?, 0)?;
    let lxl = l.try_mul(&x)?.try_mul(&l)?;
    let xlx = x.try_mul(&l)?.try_mul(&x)?;
    let through = format!("through ε^{order}");
    Ok(vec![
        Check::new("L L⁺ L = L", lxl.agrees_through(&l, order as isize), through.clone()),
        Check::new("L⁺ L L⁺ = L⁺", xlx.agrees_through(&x, order as isize), through),
    ])
}

fn invert(spec: &FamilySpec, family: &MatFamily, flags: &Flags) -> Result<Report, CliError> {
    let d = diagonalize_family(family, &Flags { order: None, ..flags.clone() })?;
    let k = d.k();
    let order = match (flags.order, family.known_order()) {
        (Some(t), _) => t,
        (None, None) => 12,
        (None, Some(t)) => t.checked_sub(2 * k).ok_or(opfamily::Error::InsufficientOrder { required: 2 * k, available: t })?.min(12),
    };
    let x = d.generalized_inverse(order)?;
    let folded = x.shift(spec.declared_pole as isize)?;
    let mut report = base_report(Command::Invert, spec, d.recursion(), k);
    report.inverse = Some(InverseReport { pole_order: folded.pole_order(), coefficients: Listing::from_laurent(&folded) });
    match axiom_order(&d, order) {
        Some(t) => report.checks.extend(inverse_axiom_checks(&d, t)?),
        None => report.notes.push("too few known coefficients to check the inverse axioms".into()),
    }
    Ok(report)
}

fn jordan(spec: &FamilySpec, family: &MatFamily, flags: &Flags, length: usize) -> Result<Report, CliError> {
    let (mut rec, k) = stabilized(family, flags)?;
    let chains = rec.jordan_chains(length.max(1))?;
    let oracle = toeplitz_nullspace(family, chains.length)?;
    let mut report = base_report(Command::Jordan { length }, spec, &rec, k);
    report.checks.push(Check::new(
        "chains span the Toeplitz null space",
        Subspace::span(&chains.chains) == oracle && chains.chains.rank() == chains.dim(),
        format!("dimension {} against null space dimension {}", chains.dim(), oracle.dim()),
    ));
    report.jordan = Some(JordanReport {
        length: chains.length,
        kernel_dims: chains.kernels.iter().map(Subspace::dim).collect(),
        dimension: chains.dim(),
        generator: grid(&chains.generator),
        chains: column_list(&chains.chains),
    });
    Ok(report)
}

fn series_from_terms(terms: &[(usize, Mat)], rows: usize, cols: usize, order: usize) -> MatSeries {
    let mut coeffs = vec![Mat::zeros(rows, cols); order + 1];
    for (p, m) in terms {
        if *p <= order {
            coeffs[*p] = &coeffs[*p] + m;
        }
    }
    MatSeries::new(coeffs)
}

fn smith_checks(d: &Diagonalization<Rat>) -> Result<Vec<Check>, CliError> {
    let sf = d.smith_factorize()?;
    let order = d.order();
    let (m, n) = d.family().shape();
    let p = sf.p_series(order);
    let sp_p = p.left_mul(&sf.sp)?;
    let delta = series_from_terms(d.delta_terms(), m, n, order);
    let lphi = d.family().series(order)?.try_mul(d.phi())?;
    let rhs = d.psi().right_mul(&sf.sp)?.try_mul(&p)?;
    Ok(vec![
        Check::new("S_P P(ε) = Δ(ε)", sp_p == delta, "all coefficients"),
        Check::new("L φ = ψ S_P P", lphi == rhs, format!("through ε^{order}")),
    ])
}

fn linearization_parts(family: &MatFamily, flags: &Flags, k: usize) -> Result<(LinearizationReport, Vec<Check>), CliError> {
    let pencil = linearize_polynomial(family)?;
    let n = pencil.n;
    let pencil_family = pencil.family();
    let mut prec = Recursion::new(pencil_family.clone(), ComplementStrategy::Pivot)?;
    let k_bar = prec.stabilize(flags.max_stages)?;
    let bound = (k_bar as isize - 1) * (n as isize) < k as isize && k <= k_bar * n;
    let mut chains_ok = true;
    for groups in 1..=k_bar + 1 {
        let poly = toeplitz_nullspace(family, groups * n)?;
        let moved = Subspace::span(&pencil.to_pencil_coordinates(poly.basis(), family.shape().1));
        chains_ok &= moved == toeplitz_nullspace(&pencil_family, groups)?;
    }
    let checks = vec![
        Check::new("linearization bound", bound, format!("(k̄ − 1)·n < k ≤ k̄·n with k = {k}, n = {n}, k̄ = {k_bar}")),
        Check::new("pencil chains regroup polynomial chains", chains_ok, format!("lengths 1..={} of the pencil", k_bar + 1)),
    ];
    let report = LinearizationReport { degree: n, k, k_bar, lbar0: grid(&pencil.lbar0), lbar1: grid(&pencil.lbar1) };
    Ok((report, checks))
}

fn linearize(spec: &FamilySpec, family: &MatFamily, flags: &Flags) -> Result<Report, CliError> {
    let (rec, k) = stabilized(family, flags)?;
    let (lin, checks) = linearization_parts(family, flags, k)?;
    let mut report = base_report(Command::Linearize, spec, &rec, k);
    report.linearization = Some(lin);
    report.checks.extend(checks);
    Ok(report)
}

fn structure_checks(d: &Diagonalization<Rat>) -> Vec<Check> {
    let rec = d.recursion();
    let (k, stages) = (d.k(), rec.stages());
    let mut e_bad = Vec::new();
    for j in (k + 2)..=stages {
        for i in (k + 2)..j {
            if !rec.e(i, j).is_zero() {
                e_bad.push((i, j));
            }
        }
    }
    let mut m_bad = Vec::new();
    for j in (k + 3)..=stages {
        for r in (k + 2)..=j {
            if rec.m(r, j) != rec.m(r - 1, j - 1) {
                m_bad.push((r, j));
            }
        }
    }
    vec![
        Check::new("E zero pattern", e_bad.is_empty(), format!("E_{{i,j}} = 0 for k+2 ≤ i < j ≤ {stages}; failing {e_bad:?}")),
        Check::new("M shift", m_bad.is_empty(), format!("M_{{r,j}} = M_{{r−1,j−1}} for j ≥ k+3 up to {stages}; failing {m_bad:?}")),
    ]
}

fn verify(spec: &FamilySpec, family: &MatFamily, flags: &Flags) -> Result<Report, CliError> {
    let d = diagonalize_family(family, flags)?;
    let k = d.k();
    let mut report = base_report(Command::Verify, spec, d.recursion(), k);
    add_transformations(&mut report, &d, spec);

    report.checks.push(chain_identity_check(d.recursion()));
    report.checks.extend(structure_checks(&d));
    report.checks.push(residual_check(&d)?);
    report.checks.push(triangularization_check(&d)?);
    report.checks.extend(smith_checks(&d)?);

    let dec = d.recursion().decomposition();
    let mut sums = Vec::new();
    let mut dims = Vec::new();
    let mut acc = 0;
    for l in 1..=k + 1 {
        acc += dec.stage(l).n.dim();
        sums.push(acc);
        dims.push(toeplitz_nullspace(family, l)?.dim());
    }
    report.checks.push(Check::new(
        "Toeplitz null space dimensions",
        dims == sums,
        format!("dim N[Δ^l] for l = 1..={}: {dims:?}; Σ dim N_i: {sums:?}", k + 1),
    ));

    let order = 12;
    match axiom_order(&d, order) {
        Some(t) => report.checks.extend(inverse_axiom_checks(&d, t)?),
        None => report.notes.push("too few known coefficients to check the inverse axioms".into()),
    }

    let (m, n) = family.shape();
    let polynomial = family.kind() == FamilyKind::Polynomial;
    if polynomial && m == n && det_polynomial(family)?.iter().any(|c| *c != Rat::from_integer(0.into())) {
        let ours = d.generalized_inverse(order)?;
        let direct = direct_laurent_inverse(family, None, order)?;
        report.checks.push(Check::new(
            "Laurent oracle",
            ours.pole_order() == direct.pole_order() && ours.agrees_through(&direct, order as isize),
            format!("pole {} against {}, coefficients through ε^{order}", ours.pole_order(), direct.pole_order()),
        ));
    } else {
        report.notes.push("Laurent oracle skipped: needs a square polynomial family with det ≢ 0".into());
    }

    if polynomial && family.degree().is_some_and(|deg| deg >= 1) {
        let (_, checks) = linearization_parts(family, flags, k)?;
        report.checks.extend(checks);
    } else {
        report.notes.push("linearization skipped: needs a polynomial of degree at least 1".into());
    }
    Ok(report)
}
