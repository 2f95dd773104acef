//! Verification reports: every check of a geometry package as a named entry.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::boundary::{bgg_check, check_j0, extract_distribution, restrict_to_zero_locus};
use crate::chart::weyl_trace_residual;
use crate::error::{Error, Result};
use crate::family::{
    definite_model, qm_h_display, qm_j_display, qm_package, qm_symmetries, FamilyParams, UNTESTED_SYMMETRIES,
};
use crate::laurent::CoeffFn;
use crate::npk::{compactness_of, npk_extract, npk_verify, omega_vs_tractor, Side};
use crate::package::{GeometryPackage, Orbit};
use crate::residual::Residual;
use crate::ring::Ring;
use crate::scalar::{parse_rat, rat, rat_string, QScalar, Rat};
use crate::stable::{metric_from_3form7, Class7};
use crate::tensor::AltTensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    /// Highest s-power in a nonzero residual; null when the residual vanishes
    /// or the check is not a residual.
    pub residual_max_degree: Option<i32>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Entry {
    pub fn residual(name: impl Into<String>, r: &Residual) -> Self {
        let pass = r.is_zero();
        Entry {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual_max_degree: if pass { None } else { r.max_degree },
            pass,
            note: None,
        }
    }

    pub fn check(name: impl Into<String>, pass: bool) -> Self {
        Entry {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual_max_degree: None,
            pass,
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Entry {
            name: name.into(),
            status: Status::Skipped,
            residual_max_degree: None,
            pass: false,
            note: Some(reason.into()),
        }
    }

    pub fn failed(name: impl Into<String>, err: &Error) -> Self {
        Entry::check(name, false).note(err.to_string())
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn ok(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    pub samples: Vec<String>,
    pub entries: Vec<Entry>,
    pub zero_locus: Vec<Entry>,
    /// Exact invariants found along the way.
    pub values: BTreeMap<String, String>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    fn new(subject: impl Into<String>, samples: &[Rat]) -> Self {
        VerificationReport {
            subject: subject.into(),
            m: None,
            samples: samples.iter().map(rat_string).collect(),
            entries: Vec::new(),
            zero_locus: Vec::new(),
            values: BTreeMap::new(),
            runtime: Duration::ZERO,
        }
    }

    fn all(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().chain(&self.zero_locus)
    }

    /// No entry failed; skipped entries do not count against the report.
    pub fn all_pass(&self) -> bool {
        self.all().all(Entry::ok)
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.all().find(|e| e.name == name)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let c = |s| self.all().filter(|e| e.status == s).count();
        (c(Status::Pass), c(Status::Fail), c(Status::Skipped))
    }

    /// Deterministic JSON; the runtime is left out.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.subject);
        let _ = writeln!(out, "samples s: {}", self.samples.join(", "));
        let line = |out: &mut String, e: &Entry| {
            let tag = match e.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(out, "  {tag}  {}", e.name);
            if let Some(d) = e.residual_max_degree {
                let _ = write!(out, "  (residual up to s^{d})");
            }
            if let Some(n) = &e.note {
                let _ = write!(out, "  [{n}]");
            }
            out.push('\n');
        };
        for e in &self.entries {
            line(&mut out, e);
        }
        if !self.zero_locus.is_empty() {
            let _ = writeln!(out, "zero locus:");
            for e in &self.zero_locus {
                line(&mut out, e);
            }
        }
        if !self.values.is_empty() {
            let _ = writeln!(out, "values:");
            for (k, v) in &self.values {
                let _ = writeln!(out, "  {k} = {v}");
            }
        }
        let (p, f, s) = self.counts();
        let _ = writeln!(out, "{p} passed, {f} failed, {s} skipped");
        let _ = writeln!(out, "runtime: {:.3} s", self.runtime.as_secs_f64());
        out
    }
}

/// Sample values of s. A sample s sits at ρ = s|s|, so its sign picks the orbit.
pub fn default_samples() -> Vec<Rat> {
    [(-2, 1), (-1, 1), (-1, 2), (1, 2), (1, 1), (2, 1)]
        .iter()
        .map(|&(p, q)| rat(p, q))
        .collect()
}

/// Parse a comma-separated list of nonzero rationals.
pub fn parse_samples(s: &str) -> Result<Vec<Rat>> {
    let out = s.split(',').map(|t| parse_rat(t.trim())).collect::<Result<Vec<_>>>()?;
    if out.is_empty() || out.iter().any(|r| *r == rat(0, 1)) {
        return Err(Error::InvalidParam(
            "samples must be a nonempty list of nonzero rationals".into(),
        ));
    }
    Ok(out)
}

pub fn rho_of_sample(s: &Rat) -> Rat {
    if *s < rat(0, 1) {
        -(s * s)
    } else {
        s * s
    }
}

fn entry_of<T>(name: &str, r: Result<T>, f: impl FnOnce(T) -> Entry) -> Entry {
    match r {
        Ok(v) => f(v),
        Err(e) => Entry::failed(name, &e),
    }
}

fn fmt_coeff(v: &CoeffFn) -> String {
    v.as_constant().map_or_else(|| v.to_string(), |c| c.to_string())
}

fn fmt_sig((p, q): (usize, usize)) -> String {
    format!("({p},{q})")
}

/// The checks that make sense for any package.
fn package_entries(pkg: &GeometryPackage, samples: &[Rat], rep: &mut VerificationReport) -> Result<bool> {
    let e = &mut rep.entries;
    e.push(Entry::residual("jacobi", &pkg.chart.jacobi_residual()));
    e.push(Entry::residual("torsion_free", &pkg.chart.torsion_residual()));
    e.push(Entry::residual("special_scale", &pkg.chart.special_residual()));
    e.push(Entry::residual(
        "weyl_tracefree",
        &weyl_trace_residual(&pkg.curvature.weyl),
    ));
    e.push(Entry::residual(
        "tractor_volume_parallel",
        &pkg.tractor.volume_residual(),
    ));
    let flat = pkg.tractor.curvature_residual().is_zero();
    rep.values
        .insert("tractor_curvature".into(), if flat { "flat" } else { "curved" }.into());

    let phi_parallel = pkg.phi_parallel_residual();
    e.push(Entry::residual("phi_parallel", &phi_parallel));
    e.push(Entry::residual("h_parallel", &pkg.h_parallel_residual()));
    e.push(entry_of("h_contraction", pkg.contraction_residual(), |r| {
        Entry::residual("h_contraction", &r)
    }));

    let mut classes = Vec::new();
    let mut class_ok = true;
    for s in samples {
        let rho = QScalar::from_rat(rho_of_sample(s));
        let m7 = eval_form(&pkg.phi, &rho).and_then(|phi| metric_from_3form7(&phi));
        match m7 {
            Ok(m) => {
                classes.push(format!("{:?}", m.class));
                class_ok &= m.class != Class7::Degenerate && m.contraction_identity;
            }
            Err(err) => {
                classes.push(err.to_string());
                class_ok = false;
            }
        }
    }
    classes.dedup();
    rep.values.insert("phi_class".into(), classes.join(", "));
    rep.entries.push(Entry::check("phi_generic_at_samples", class_ok));

    let st = match pkg.stratify() {
        Ok(st) => st,
        Err(err) => {
            rep.entries.push(Entry::failed("stratification", &err));
            return Ok(false);
        }
    };
    rep.values.insert("tau".into(), fmt_coeff(&st.tau));
    let labels: Vec<&str> = st.orbits.iter().map(Orbit::label).collect();
    rep.values.insert("orbits".into(), labels.join(" "));
    let mut orbit_ok = true;
    for s in samples {
        let tau = st.tau.eval(&QScalar::from_rat(rho_of_sample(s)))?;
        orbit_ok &= tau.signum() == if *s < rat(0, 1) { -1 } else { 1 } || st.tau.is_constant();
    }
    let regular = !st.has_zero_locus || !st.d_tau_at_zero.is_zero();
    rep.entries.push(Entry::check("stratification", orbit_ok && regular));
    rep.entries.push(Entry::check("h_normal_form", pkg.normal_form_check()));

    let jf = pkg.jfield();
    rep.entries.push(Entry::residual("jj_kills_x", &jf.jx));
    rep.entries.push(Entry::residual("jj_squared", &jf.jj_squared));
    rep.entries.push(Entry::residual("j_squared", &jf.j_squared));

    let (sigma, _) = pkg.slots();
    let ky = pkg.tractor.ky_prolong(&sigma, &pkg.curvature.weyl);
    rep.entries
        .push(Entry::residual("killing_yano_prolongation", &ky.residual()));
    Ok(phi_parallel.is_zero() && !st.tau.is_constant())
}

fn eval_form(phi: &AltTensor<CoeffFn>, s: &QScalar) -> Result<AltTensor<QScalar>> {
    let mut out = AltTensor::new(phi.dim(), phi.valence(), phi.symmetry());
    for (idx, v) in phi.entries() {
        out.set(idx, v.eval(s)?);
    }
    Ok(out)
}

fn npk_entries(pkg: &GeometryPackage, samples: &[Rat], rep: &mut VerificationReport) {
    for side in [Side::Plus, Side::Minus] {
        let tag = match side {
            Side::Plus => "plus",
            Side::Minus => "minus",
        };
        let name = |s: &str| format!("npk_{tag}_{s}");
        let st = match npk_extract(pkg, side) {
            Ok(st) => st,
            Err(err) => {
                rep.entries.push(Entry::failed(name("extract"), &err));
                continue;
            }
        };
        let r = match npk_verify(&st) {
            Ok(r) => r,
            Err(err) => {
                rep.entries.push(Entry::failed(name("verify"), &err));
                continue;
            }
        };
        let e = &mut rep.entries;
        e.push(Entry::residual(name("hermitian"), &r.hermitian));
        e.push(Entry::residual(name("omega_skew"), &r.omega_skew));
        e.push(Entry::residual(name("j_squared"), &r.j_squared).note(format!("J² = {} id", r.eps)));
        e.push(Entry::residual(name("killing_yano"), &r.killing_yano));
        e.push(Entry::check(name("strict"), !r.nabla_j_zero));
        e.push(Entry::residual(name("constant_type"), &r.constant_type));
        e.push(Entry::residual(name("einstein"), &r.einstein));
        e.push(Entry::residual(name("scalar_curvature"), &r.scalar_alpha));
        e.push(Entry::residual(name("weyl_identity"), &r.weyl_identity));
        e.push(Entry::residual(name("nijenhuis_skew"), &r.nijenhuis));
        e.push(Entry::residual(name("torsion_skew"), &r.torsion_skew));
        e.push(Entry::check(name("nabla_j_norm_constant"), r.nabla_j_norm_constant()));
        e.push(Entry::residual(
            name("kahler_form_is_sigma"),
            &omega_vs_tractor(pkg, &st),
        ));
        match (compactness_of(&st, 2), compactness_of(&st, 1)) {
            (Ok(c2), Ok(c1)) => {
                e.push(Entry::check(name("projectively_compact_order_2"), c2.regular));
                let mut c1e = Entry::check(name("not_compact_order_1"), !c1.regular);
                if let Some(p) = c1.worst_pole {
                    c1e = c1e.note(format!("pole s^{p}"));
                }
                e.push(c1e);
            }
            (Err(err), _) | (_, Err(err)) => e.push(Entry::failed(name("compactness"), &err)),
        }

        let mut sigs = Vec::new();
        let mut sig_ok = true;
        for s in samples.iter().filter(|s| (**s < rat(0, 1)) == (side == Side::Minus)) {
            let sig =
                st.g.eval(&QScalar::from_rat(num::Signed::abs(s)))
                    .and_then(|g| g.signature());
            match sig {
                Ok((p, q)) => {
                    sig_ok &= if side == Side::Minus {
                        (p, q) == (3, 3)
                    } else {
                        p % 2 == 0 && q % 2 == 0
                    };
                    sigs.push(fmt_sig((p, q)));
                }
                Err(_) => {
                    sig_ok = false;
                    sigs.push("degenerate".into());
                }
            }
        }
        sigs.dedup();
        if sigs.is_empty() {
            rep.entries
                .push(Entry::skipped(name("signature_at_samples"), "no sample on this orbit"));
        } else {
            rep.entries.push(Entry::check(name("signature_at_samples"), sig_ok));
            rep.values.insert(name("signature"), sigs.join(", "));
        }
        if let Some(a) = &r.alpha {
            rep.values.insert(name("einstein_constant"), a.to_string());
        }
        rep.values
            .insert(name("scalar_curvature"), fmt_coeff(&r.scalar_curvature));
        rep.values.insert(name("nabla_j_norm"), fmt_coeff(&r.nabla_j_norm));
    }
}

fn zero_locus_entries(pkg: &GeometryPackage, rep: &mut VerificationReport) {
    let zl = match restrict_to_zero_locus(pkg) {
        Ok(zl) => zl,
        Err(err) => {
            rep.zero_locus.push(Entry::failed("restriction", &err));
            return;
        }
    };
    let z = &mut rep.zero_locus;
    z.push(Entry::residual("tangent_frame", &zl.tangency));
    z.push(Entry::residual("levi_civita_is_projective", &zl.connection_match));
    z.push(Entry::residual("conformal_tractor_is_restriction", &zl.tractor_match));
    z.push(Entry::check("signature_2_3", matches!(zl.signature, (2, 3) | (3, 2))).note(fmt_sig(zl.signature)));
    let j0 = check_j0(&zl);
    z.push(Entry::residual("jj0_kills_x", &j0.jx));
    z.push(Entry::residual("jj0_squared", &j0.jj_squared));
    z.push(Entry::residual("j0_nilpotent", &j0.j_squared));
    z.push(Entry::check("j0_rank_2", j0.j0_rank == 2 && j0.ker_j0_dim == 3));
    let f = j0.filtration;
    z.push(
        Entry::check(
            "jj0_filtration",
            f == [1, 3, 4, 6] && j0.filtration_nested && j0.ker_isotropic,
        )
        .note(format!("({},{},{},{})", f[0], f[1], f[2], f[3])),
    );
    z.push(Entry::check(
        "projections_match",
        j0.proj_ker_is_im && j0.proj_im_is_ker,
    ));
    match extract_distribution(&zl) {
        Ok(d) => {
            let g = d.growth;
            z.push(Entry::check("growth_2_3_5", d.is_235()).note(format!("({},{},{})", g[0], g[1], g[2])));
            z.push(Entry::check(
                "derived_is_ker_j0",
                d.dd_is_ker_j0 && d.dd_is_ker_pullback,
            ));
            z.push(Entry::check("d_perp_is_derived", d.d_perp_is_dd && d.d_null_against_dd));
            z.push(Entry::check(
                "omega0_decomposable",
                d.omega0_decomposable && d.bivector_spans_d,
            ));
            z.push(Entry::check("projecting_part", d.projecting_part));
        }
        Err(err) => z.push(Entry::failed("distribution", &err)),
    }
    let bgg = bgg_check(&zl);
    z.push(Entry::residual("bgg_round_trip", &bgg.round_trip));
    z.push(Entry::residual("bgg_parallel", &bgg.parallel));
}

/// All checks for a package with a parallel tractor 3-form.
pub fn verify_package(pkg: &GeometryPackage, samples: &[Rat]) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut rep = VerificationReport::new(pkg.label.clone(), samples);
    let full = package_entries(pkg, samples, &mut rep)?;
    if full {
        npk_entries(pkg, samples, &mut rep);
        zero_locus_entries(pkg, &mut rep);
    } else {
        rep.entries.push(Entry::skipped(
            "npk",
            "needs a parallel tractor 3-form and nonconstant τ",
        ));
        rep.zero_locus.push(Entry::skipped(
            "restriction",
            "needs a parallel tractor 3-form and a zero locus",
        ));
    }
    rep.runtime = start.elapsed();
    Ok(rep)
}

/// The q^m package with its displayed data and symmetries.
pub fn verify_family(p: &FamilyParams, samples: &[Rat]) -> Result<VerificationReport> {
    let start = Instant::now();
    let pkg = qm_package(p)?;
    let mut rep = verify_package(&pkg, samples)?;
    rep.m = Some(rat_string(&p.m));
    let mut extra = vec![
        Entry::check("h_matches_display", pkg.h == qm_h_display(p)),
        Entry::check(
            "j_matches_display",
            pkg.jfield().j == qm_j_display(p).scale(&CoeffFn::int(-1)),
        ),
        Entry::check(
            "tau_is_2rho",
            pkg.tau == CoeffFn::rho(pkg.chart.param()).scale(&QScalar::int(2)),
        ),
        Entry::check(
            "flat_iff_special_m",
            pkg.tractor.curvature_residual().is_zero() == p.is_flat_value(),
        ),
    ];
    for sym in qm_symmetries(p) {
        let ok = pkg.symmetry_check(&sym).pass();
        extra.push(if sym.verified {
            Entry::check(format!("symmetry_{}", sym.name), ok)
        } else {
            Entry::check(format!("non_symmetry_{}", sym.name), !ok).note("negative control")
        });
    }
    for (name, reason) in UNTESTED_SYMMETRIES {
        extra.push(Entry::skipped(format!("symmetry_{name}"), *reason));
    }
    rep.entries.extend(extra);
    rep.runtime = start.elapsed();
    Ok(rep)
}

/// The definite model: algebraic checks only.
pub fn verify_definite(samples: &[Rat]) -> Result<VerificationReport> {
    let start = Instant::now();
    let pkg = definite_model()?;
    let mut rep = VerificationReport::new(pkg.label.clone(), samples);
    let m7 = metric_from_3form7(&eval_form(&pkg.phi, &QScalar::one())?)?;
    rep.entries.push(Entry::check(
        "phi_definite",
        m7.class == Class7::Definite && m7.contraction_identity,
    ));
    rep.entries
        .push(Entry::residual("h_contraction", &pkg.contraction_residual()?));
    let sig = pkg.signature_at(&QScalar::one())?;
    rep.entries
        .push(Entry::check("signature_7_0", sig == (7, 0)).note(fmt_sig(sig)));
    let st = pkg.stratify()?;
    rep.entries.push(Entry::check("tau_positive", st.tau == CoeffFn::one()));
    rep.entries.push(Entry::check(
        "single_orbit",
        st.orbits == vec![Orbit::Plus] && !st.has_zero_locus,
    ));
    let jf = pkg.jfield();
    rep.entries.push(Entry::residual("jj_kills_x", &jf.jx));
    rep.entries.push(Entry::residual("jj_squared", &jf.jj_squared));
    rep.entries.push(Entry::residual("j_squared", &jf.j_squared));
    let reason = "constant Φ is not parallel for the flat tractor connection of this chart";
    rep.entries.push(Entry::skipped("phi_parallel", reason));
    rep.entries.push(Entry::skipped("npk", reason));
    rep.zero_locus
        .push(Entry::skipped("restriction", "the zero locus is empty"));
    rep.runtime = start.elapsed();
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitReport {
    pub m: String,
    pub s: String,
    pub rho: String,
    pub tau: String,
    pub orbit: String,
    pub h_signature: Option<(usize, usize)>,
    /// J² = ε id on the open orbits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_signature: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub einstein_constant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_curvature: Option<String>,
    /// Growth vector of the distribution on the zero locus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<[usize; 3]>,
    pub pass: bool,
}

impl OrbitReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "m = {}, s = {}, rho = {}", self.m, self.s, self.rho);
        let _ = writeln!(out, "tau = {}  orbit {}", self.tau, self.orbit);
        if let Some(sig) = self.h_signature {
            let _ = writeln!(out, "H signature {}", fmt_sig(sig));
        }
        if let Some(e) = self.eps {
            let _ = writeln!(out, "J^2 = {e} id");
        }
        if let Some(sig) = self.g_signature {
            let _ = writeln!(out, "g signature {}", fmt_sig(sig));
        }
        if let Some(a) = &self.einstein_constant {
            let _ = writeln!(out, "Ric = 5 alpha g with alpha = {a}");
        }
        if let Some(sc) = &self.scalar_curvature {
            let _ = writeln!(out, "scalar curvature {sc}");
        }
        if let Some(g) = self.growth {
            let _ = writeln!(out, "distribution growth ({},{},{})", g[0], g[1], g[2]);
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// The structure seen at the point with collar value ρ = s|s|.
pub fn orbit_report(p: &FamilyParams, s: &Rat) -> Result<OrbitReport> {
    let pkg = qm_package(p)?;
    let rho = rho_of_sample(s);
    let rho_q = QScalar::from_rat(rho.clone());
    let tau = pkg.tau.eval(&rho_q)?;
    let orbit = match tau.signum() {
        1 => Orbit::Plus,
        -1 => Orbit::Minus,
        _ => Orbit::Zero,
    };
    let mut rep = OrbitReport {
        m: rat_string(&p.m),
        s: rat_string(s),
        rho: rat_string(&rho),
        tau: tau.to_string(),
        orbit: orbit.label().into(),
        h_signature: pkg.signature_at(&rho_q).ok(),
        eps: None,
        g_signature: None,
        einstein_constant: None,
        scalar_curvature: None,
        growth: None,
        pass: false,
    };
    let side = match orbit {
        Orbit::Plus => Side::Plus,
        Orbit::Minus => Side::Minus,
        Orbit::Zero => {
            let zl = restrict_to_zero_locus(&pkg)?;
            let d = extract_distribution(&zl)?;
            rep.growth = Some(d.growth);
            rep.g_signature = Some(zl.signature);
            rep.pass = d.pass() && check_j0(&zl).pass();
            return Ok(rep);
        }
    };
    let st = npk_extract(&pkg, side)?;
    let r = npk_verify(&st)?;
    let abs_s = QScalar::from_rat(num::Signed::abs(s));
    rep.eps = Some(st.eps);
    rep.g_signature = st.g.eval(&abs_s)?.signature().ok();
    rep.einstein_constant = r.alpha.as_ref().map(ToString::to_string);
    rep.scalar_curvature = Some(r.scalar_curvature.eval(&abs_s)?.to_string());
    rep.pass = r.all_pass() && rep.g_signature.is_some();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{qm_chart, qm_mu, qm_omega};
    use crate::tractor::tractor_3form;

    #[test]
    fn half_passes_everything() {
        let rep = verify_family(&FamilyParams::parse("1/2").unwrap(), &default_samples()).unwrap();
        let failed: Vec<_> = rep.entries.iter().chain(&rep.zero_locus).filter(|e| !e.ok()).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert_eq!(rep.values["npk_minus_einstein_constant"], "-1");
        assert_eq!(rep.entry("symmetry_xi7").unwrap().status, Status::Skipped);
    }

    #[test]
    fn json_is_deterministic() {
        let p = FamilyParams::parse("2").unwrap();
        let a = verify_family(&p, &default_samples()).unwrap().to_json();
        let b = verify_family(&p, &default_samples()).unwrap().to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert!(v["zero_locus"].as_array().unwrap().len() > 5);
        assert!(v.get("runtime").is_none());
    }

    #[test]
    fn perturbed_phi_fails_differential_checks() {
        // Φ of m = 3 on the chart of m = 1/2
        let (a, b) = (FamilyParams::parse("1/2").unwrap(), FamilyParams::parse("3").unwrap());
        let pkg = GeometryPackage::new("perturbed", qm_chart(&a), tractor_3form(&qm_omega(&b), &qm_mu())).unwrap();
        let rep = verify_package(&pkg, &default_samples()).unwrap();
        assert!(!rep.all_pass());
        assert!(!rep.entry("phi_parallel").unwrap().pass);
        for name in ["jacobi", "torsion_free", "special_scale", "h_contraction", "jj_squared"] {
            assert!(rep.entry(name).unwrap().pass, "{name}");
        }
        assert_eq!(rep.entry("npk").unwrap().status, Status::Skipped);
    }

    #[test]
    fn definite_report() {
        let rep = verify_definite(&default_samples()).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.entry("npk").unwrap().status, Status::Skipped);
    }

    #[test]
    fn orbits() {
        let p = FamilyParams::parse("1/2").unwrap();
        let minus = orbit_report(&p, &rat(-1, 1)).unwrap();
        assert_eq!(
            (minus.orbit.as_str(), minus.eps, minus.g_signature),
            ("M-", Some(1), Some((3, 3)))
        );
        assert_eq!(minus.scalar_curvature.as_deref(), Some("-30"));
        assert!(minus.pass);
        let zero = orbit_report(&p, &rat(0, 1)).unwrap();
        assert_eq!(zero.growth, Some([2, 3, 5]));
        assert!(zero.pass);
        let plus = orbit_report(&p, &rat(3, 2)).unwrap();
        assert_eq!((plus.orbit.as_str(), plus.eps), ("M+", Some(-1)));
        assert!(plus.pass, "{}", plus.to_text());
    }

    #[test]
    fn samples() {
        assert_eq!(parse_samples("1/2, -3").unwrap(), vec![rat(1, 2), rat(-3, 1)]);
        assert!(parse_samples("0").is_err());
        assert!(parse_samples("a").is_err());
        assert_eq!(rho_of_sample(&rat(-2, 1)), rat(-4, 1));
    }
}
