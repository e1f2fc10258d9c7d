//! Check registry, verification reports and parameter scans behind the
//! command-line interface.
//!
//! A check evaluates one or more residuals of a catalog example over a
//! seeded sample plan and turns each into a [`CheckRecord`]. Records of
//! negative controls carry [`Expectation::Fails`]; their residual is the
//! quantity that must stay *above* the tolerance.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{self, CatalogEntry, Family};
use crate::cayley_dickson::octonionic_laplacian_check;
use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::laplace::{self, KillingField};
use crate::linalg;
use crate::manifold::{
    frame_at, projected_normal_frame, second_form_rank, simons_matrix, simons_matrix_in_basis,
    AmbientSpace, NormalSection, View,
};
use crate::sampling::{sweep, SamplePlan, ToleranceProfile, DEFAULT_SAMPLES};

/// Version tag carried by every report.
pub const FORMAT_VERSION: &str = "gaussmap-report/1";

type E = CatalogEntry<f64>;

/// Identifiers accepted by `verify` and `scan`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckId {
    KillingFlat,
    KillingSphere,
    KillingHyperbolic,
    TangentPart,
    N2Eta,
    Corol2,
    EulerLagrange,
    Thm3Equivalence,
    HarmTheta,
    LemmasphereDecomp,
    IsornSpectrum,
    OctonionLapoc,
    Nhs4Scan,
    ClassificationScan,
}

impl CheckId {
    pub const ALL: [CheckId; 14] = [
        CheckId::KillingFlat,
        CheckId::KillingSphere,
        CheckId::KillingHyperbolic,
        CheckId::TangentPart,
        CheckId::N2Eta,
        CheckId::Corol2,
        CheckId::EulerLagrange,
        CheckId::Thm3Equivalence,
        CheckId::HarmTheta,
        CheckId::LemmasphereDecomp,
        CheckId::IsornSpectrum,
        CheckId::OctonionLapoc,
        CheckId::Nhs4Scan,
        CheckId::ClassificationScan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::KillingFlat => "killing-flat",
            CheckId::KillingSphere => "killing-sphere",
            CheckId::KillingHyperbolic => "killing-hyperbolic",
            CheckId::TangentPart => "tangent-part",
            CheckId::N2Eta => "n2eta",
            CheckId::Corol2 => "corol2",
            CheckId::EulerLagrange => "euler-lagrange",
            CheckId::Thm3Equivalence => "thm3-equivalence",
            CheckId::HarmTheta => "harm-theta",
            CheckId::LemmasphereDecomp => "lemmasphere-decomp",
            CheckId::IsornSpectrum => "isorn-spectrum",
            CheckId::OctonionLapoc => "octonion-lapoc",
            CheckId::Nhs4Scan => "nhS4-scan",
            CheckId::ClassificationScan => "classification-scan",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CheckId::KillingFlat => "rough Laplacian of Euclidean Killing fields, flat view",
            CheckId::KillingSphere => "rough Laplacian of spherical Killing fields, sphere view",
            CheckId::KillingHyperbolic => "rough Laplacian of Lorentz Killing fields, hyperbolic view",
            CheckId::TangentPart => "tangent part of the rough Laplacian of a normal section",
            CheckId::N2Eta => "normal part of the rough Laplacian of a parallel section",
            CheckId::Corol2 => "Killing pairing identities and the Laplacian of <eta, V>",
            CheckId::EulerLagrange => "Euler-Lagrange residual of harmonic unit normal sections",
            CheckId::Thm3Equivalence => "harmonic Gauss map iff Simons eigen-section",
            CheckId::HarmTheta => "harmonic angles of parallel sections of sphere hypersurfaces",
            CheckId::LemmasphereDecomp => "decomposition of the Gauss-map Laplacian in {grad H, nu, mu}",
            CheckId::IsornSpectrum => "constant Simons spectrum and harmonic eigen-sections",
            CheckId::OctonionLapoc => "Laplacian of the octonionic Gauss map",
            CheckId::Nhs4Scan => "no harmonic Gauss map on a grid of Veronese normal sections",
            CheckId::ClassificationScan => "best constant-angle section of a surface of S^3",
        }
    }

    pub fn default_example(self) -> &'static str {
        match self {
            CheckId::KillingHyperbolic => "lorentz",
            CheckId::N2Eta
            | CheckId::EulerLagrange
            | CheckId::IsornSpectrum
            | CheckId::OctonionLapoc => "clifford(1,2)",
            CheckId::Thm3Equivalence | CheckId::LemmasphereDecomp => "htorus(0.5,3)",
            CheckId::Nhs4Scan => "veronese",
            _ => "circles(0.6)",
        }
    }

    fn params(self) -> &'static [&'static str] {
        match self {
            CheckId::KillingFlat | CheckId::KillingSphere | CheckId::KillingHyperbolic => {
                &["samples", "killings"]
            }
            CheckId::Corol2 => &["samples", "killings"],
            CheckId::EulerLagrange
            | CheckId::HarmTheta
            | CheckId::LemmasphereDecomp
            | CheckId::ClassificationScan => &["samples", "theta"],
            CheckId::Thm3Equivalence => &["samples", "twist"],
            CheckId::Nhs4Scan => &["samples", "alpha_count", "beta_count"],
            _ => &["samples"],
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown check '{s}' (see `gaussmap list`)")))
    }
}

/// What a record is expected to show.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// The residual must be at most the tolerance.
    Holds,
    /// Negative control: the residual must exceed the tolerance.
    Fails,
    /// Survey record with no claim attached.
    Observe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    FailExpected,
    UnexpectedPass,
    Observed,
}

impl Verdict {
    /// A NaN residual is a failure whatever the expectation.
    pub fn decide(max_residual: f64, tolerance: f64, expectation: Expectation) -> Verdict {
        if max_residual.is_nan() {
            return Verdict::Fail;
        }
        match expectation {
            Expectation::Holds if max_residual <= tolerance => Verdict::Pass,
            Expectation::Holds => Verdict::Fail,
            Expectation::Fails if max_residual > tolerance => Verdict::FailExpected,
            Expectation::Fails => Verdict::UnexpectedPass,
            Expectation::Observe => Verdict::Observed,
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::UnexpectedPass)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::FailExpected => "fail-expected",
            Verdict::UnexpectedPass => "unexpected-pass",
            Verdict::Observed => "observed",
        }
    }
}

/// One residual of one check on one example.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub example: String,
    /// What was evaluated (section, field family, angle, ...).
    pub subject: String,
    pub params: BTreeMap<String, String>,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub expectation: Expectation,
    pub verdict: Verdict,
    pub details: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format_version: String,
    pub run_id: String,
    pub seed: u64,
    pub tolerance_profile: ToleranceProfile,
    pub checks: Vec<CheckRecord>,
}

/// Short SHA-256 digest of the serialised payload.
fn digest<T: Serialize>(payload: &T) -> String {
    let bytes = serde_json::to_vec(payload).expect("serialisable payload");
    let hash = Sha256::digest(&bytes);
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

impl VerificationReport {
    fn new(seed: u64, tolerance_profile: ToleranceProfile, checks: Vec<CheckRecord>) -> Self {
        let run_id = digest(&(FORMAT_VERSION, seed, &tolerance_profile, &checks));
        VerificationReport {
            format_version: FORMAT_VERSION.into(),
            run_id,
            seed,
            tolerance_profile,
            checks,
        }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.verdict.is_failure())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows: Vec<(BTreeMap<String, String>, &CheckRecord)> =
            self.checks.iter().map(|c| (BTreeMap::new(), c)).collect();
        csv_table(&[], &rows)
    }
}

/// One grid point of a scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub grid: BTreeMap<String, String>,
    pub record: CheckRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub format_version: String,
    pub run_id: String,
    pub seed: u64,
    pub tolerance_profile: ToleranceProfile,
    pub check_id: String,
    pub example: String,
    pub grid: String,
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.record.verdict.is_failure())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_csv(&self) -> Result<String> {
        let keys: Vec<String> = self
            .rows
            .first()
            .map(|r| r.grid.keys().cloned().collect())
            .unwrap_or_default();
        let rows: Vec<(BTreeMap<String, String>, &CheckRecord)> =
            self.rows.iter().map(|r| (r.grid.clone(), &r.record)).collect();
        csv_table(&keys, &rows)
    }
}

fn join_map<V: fmt::Display>(m: &BTreeMap<String, V>) -> String {
    m.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// CSV projection: grid columns, then the record fields; `params` and
/// `details` are `k=v` lists joined by `;`.
fn csv_table(grid_keys: &[String], rows: &[(BTreeMap<String, String>, &CheckRecord)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = grid_keys.to_vec();
    header.extend(
        [
            "check_id",
            "example",
            "subject",
            "params",
            "samples",
            "max_residual",
            "tolerance",
            "expectation",
            "verdict",
            "details",
        ]
        .map(String::from),
    );
    let io = |e: csv::Error| Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    };
    w.write_record(&header).map_err(io)?;
    for (grid, c) in rows {
        let mut rec: Vec<String> = grid_keys
            .iter()
            .map(|k| grid.get(k).cloned().unwrap_or_default())
            .collect();
        rec.extend([
            c.check_id.clone(),
            c.example.clone(),
            c.subject.clone(),
            join_map(&c.params),
            c.samples.to_string(),
            format!("{:e}", c.max_residual),
            format!("{:e}", c.tolerance),
            match c.expectation {
                Expectation::Holds => "holds",
                Expectation::Fails => "fails",
                Expectation::Observe => "observe",
            }
            .to_string(),
            c.verdict.as_str().to_string(),
            c.details
                .iter()
                .map(|(k, v)| format!("{k}={v:e}"))
                .collect::<Vec<_>>()
                .join(";"),
        ]);
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// Request for one verification run.
#[derive(Clone, Debug)]
pub struct VerifyRequest {
    /// `None` runs every check on its default example.
    pub check: Option<CheckId>,
    pub example: Option<String>,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub tolerance: ToleranceProfile,
}

pub fn verify(req: &VerifyRequest) -> Result<VerificationReport> {
    let mut records = Vec::new();
    match req.check {
        Some(check) => {
            let example = req
                .example
                .clone()
                .unwrap_or_else(|| check.default_example().to_string());
            records.extend(run_check(check, &example, &req.params, req.seed, &req.tolerance)?);
        }
        None => {
            if req.example.is_some() || !req.params.is_empty() {
                return Err(Error::Usage(
                    "`verify all` runs each check on its default example; drop --example/--param"
                        .into(),
                ));
            }
            for check in CheckId::ALL {
                records.extend(run_check(
                    check,
                    check.default_example(),
                    &req.params,
                    req.seed,
                    &req.tolerance,
                )?);
            }
        }
    }
    Ok(VerificationReport::new(req.seed, req.tolerance.clone(), records))
}

/// Parsed `key=lo:hi:count;key2=v1,v2` grid, in key order.
pub fn parse_grid(spec: &str) -> Result<Vec<(String, Vec<String>)>> {
    let mut axes: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, values) = part
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("grid axis '{part}' needs key=values")))?;
        let key = key.trim().to_string();
        let values = values.trim();
        let list: Vec<String> = if values.contains(':') {
            let bits: Vec<&str> = values.split(':').collect();
            if bits.len() != 3 {
                return Err(Error::Usage(format!("range '{values}' must be lo:hi:count")));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Usage(format!("bad number '{s}' in grid: {e}")))
            };
            let (lo, hi) = (num(bits[0])?, num(bits[1])?);
            let count: usize = bits[2]
                .trim()
                .parse()
                .map_err(|e| Error::Usage(format!("bad count '{}' in grid: {e}", bits[2])))?;
            if count == 0 {
                return Err(Error::Usage(format!("grid axis '{key}' is empty")));
            }
            (0..count)
                .map(|i| {
                    let x = if count == 1 {
                        lo
                    } else {
                        lo + (hi - lo) * i as f64 / (count - 1) as f64
                    };
                    format!("{x}")
                })
                .collect()
        } else {
            values.split(',').map(|v| v.trim().to_string()).collect()
        };
        if list.iter().any(String::is_empty) {
            return Err(Error::Usage(format!("grid axis '{key}' has an empty value")));
        }
        if axes.insert(key.clone(), list).is_some() {
            return Err(Error::Usage(format!("grid axis '{key}' given twice")));
        }
    }
    if axes.is_empty() {
        return Err(Error::Usage("empty grid".into()));
    }
    Ok(axes.into_iter().collect())
}

/// Request for a scan: the example may contain `{key}` placeholders filled
/// from the grid; other grid keys become check parameters.
#[derive(Clone, Debug)]
pub struct ScanRequest {
    pub check: CheckId,
    pub example: Option<String>,
    pub grid: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub tolerance: ToleranceProfile,
}

pub fn scan(req: &ScanRequest) -> Result<ScanReport> {
    let axes = parse_grid(&req.grid)?;
    let template = req
        .example
        .clone()
        .unwrap_or_else(|| req.check.default_example().to_string());
    let mut points: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for (key, values) in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.insert(key.clone(), v.clone());
                    q
                })
            })
            .collect();
    }
    let mut rows = Vec::new();
    for point in points {
        let mut example = template.clone();
        let mut params = req.params.clone();
        for (k, v) in &point {
            let slot = format!("{{{k}}}");
            if example.contains(&slot) {
                example = example.replace(&slot, v);
            } else {
                params.insert(k.clone(), v.clone());
            }
        }
        for record in run_check(req.check, &example, &params, req.seed, &req.tolerance)? {
            rows.push(ScanRow {
                grid: point.clone(),
                record,
            });
        }
    }
    let run_id = digest(&(
        FORMAT_VERSION,
        req.seed,
        &req.tolerance,
        req.check.name(),
        &template,
        &rows,
    ));
    Ok(ScanReport {
        format_version: FORMAT_VERSION.into(),
        run_id,
        seed: req.seed,
        tolerance_profile: req.tolerance.clone(),
        check_id: req.check.name().into(),
        example: template,
        grid: req.grid.clone(),
        rows,
    })
}

/// Everything a check needs.
struct Ctx<'a> {
    check: CheckId,
    entry: E,
    params: &'a BTreeMap<String, String>,
    seed: u64,
    tol: &'a ToleranceProfile,
    plan: SamplePlan<f64>,
}

impl Ctx<'_> {
    fn param_f64(&self, key: &str) -> Result<Option<f64>> {
        self.params
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::Usage(format!("--param {key}={v}: {e}")))
            })
            .transpose()
    }

    fn param_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|e| Error::Usage(format!("--param {key}={v}: {e}"))),
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }

    fn record(
        &self,
        subject: impl Into<String>,
        max_residual: f64,
        tolerance: f64,
        expectation: Expectation,
        details: BTreeMap<String, f64>,
    ) -> CheckRecord {
        CheckRecord {
            check_id: self.check.name().into(),
            example: self.entry.name.clone(),
            subject: subject.into(),
            params: self.params.clone(),
            samples: self.plan.len(),
            max_residual,
            tolerance,
            expectation,
            verdict: Verdict::decide(max_residual, tolerance, expectation),
            details,
        }
    }

    /// Largest value of `f` over the plan.
    fn max_over<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&[f64]) -> Result<f64> + Sync + Send,
    {
        Ok(sweep(&self.plan, f)?.max())
    }

    fn negative_control(&self) -> bool {
        self.entry.family == Family::Perturbed
    }
}

fn run_check(
    check: CheckId,
    example: &str,
    params: &BTreeMap<String, String>,
    seed: u64,
    tol: &ToleranceProfile,
) -> Result<Vec<CheckRecord>> {
    if let Some(bad) = params.keys().find(|k| !check.params().contains(&k.as_str())) {
        return Err(Error::Usage(format!(
            "check '{check}' has no parameter '{bad}' (accepted: {})",
            check.params().join(", ")
        )));
    }
    let entry = catalog::by_name::<f64>(example)?;
    let samples = match params.get("samples") {
        None => DEFAULT_SAMPLES,
        Some(v) => v
            .parse::<usize>()
            .map_err(|e| Error::Usage(format!("--param samples={v}: {e}")))?,
    };
    let plan = SamplePlan::seeded(entry.immersion.domain(), seed, samples, true);
    let ctx = Ctx {
        check,
        entry,
        params,
        seed,
        tol,
        plan,
    };
    match check {
        CheckId::KillingFlat => killing(&ctx, View::Flat),
        CheckId::KillingSphere => killing(&ctx, View::Sphere),
        CheckId::KillingHyperbolic => killing(&ctx, View::Hyperbolic),
        CheckId::TangentPart => tangent_part(&ctx),
        CheckId::N2Eta => n2eta(&ctx),
        CheckId::Corol2 => corol2(&ctx),
        CheckId::EulerLagrange => euler_lagrange(&ctx),
        CheckId::Thm3Equivalence => thm3(&ctx),
        CheckId::HarmTheta => harm_theta(&ctx),
        CheckId::LemmasphereDecomp => lemmasphere(&ctx),
        CheckId::IsornSpectrum => isorn(&ctx),
        CheckId::OctonionLapoc => octonion(&ctx),
        CheckId::Nhs4Scan => nhs4(&ctx),
        CheckId::ClassificationScan => classification(&ctx),
    }
}

fn details<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn view_name(view: View) -> &'static str {
    match view {
        View::Flat => "flat",
        View::Sphere => "sphere",
        View::Hyperbolic => "hyperbolic",
    }
}

fn random_killing(view: View, m: usize, rng: &mut ChaCha8Rng) -> KillingField<f64> {
    match view {
        View::Flat => KillingField::random_euclidean(m, rng),
        View::Sphere => KillingField::random_spherical(m, rng),
        View::Hyperbolic => KillingField::random_hyperbolic(m, rng),
    }
}

fn killing(ctx: &Ctx, view: View) -> Result<Vec<CheckRecord>> {
    let imm = &ctx.entry.immersion;
    view.check_compatible(imm.ambient())?;
    let count = ctx.param_usize("killings", 5)?;
    let mut rng = ctx.rng(0x4b49_4c4c);
    let mut worst = 0.0f64;
    let mut smallest = f64::INFINITY;
    for _ in 0..count {
        let v = random_killing(view, imm.embedding_dim(), &mut rng);
        let sw = sweep(&ctx.plan, |p| laplace::killing_residual(imm, view, &v, p).map(|k| k.residual))?;
        let mag = sweep(&ctx.plan, |p| laplace::killing_residual(imm, view, &v, p).map(|k| k.magnitude))?;
        worst = crate::scalar::nan_max(worst, sw.max());
        smallest = smallest.min(mag.min());
    }
    Ok(vec![ctx.record(
        format!("{count} random Killing fields, {} view", view_name(view)),
        worst,
        ctx.tol.derived,
        Expectation::Holds,
        details([("fields", count as f64), ("min_laplacian_norm", smallest)]),
    )])
}

/// A normal section together with the view it is normal in.
struct ViewedSection {
    view: View,
    section: NormalSection<f64>,
    parallel: bool,
}

impl ViewedSection {
    fn subject(&self) -> String {
        format!("{} ({} view)", self.section.label(), view_name(self.view))
    }
}

/// Normal sections available for an example. Parallel ones come first.
fn sections(entry: &E) -> Result<Vec<ViewedSection>> {
    let imm = &entry.immersion;
    let mut out = Vec::new();
    match entry.family {
        Family::Clifford | Family::Circles | Family::HTorus | Family::Umbilical | Family::Perturbed => {
            for theta in [0.0, FRAC_PI_4, FRAC_PI_2] {
                out.push(ViewedSection {
                    view: View::Flat,
                    section: catalog::section_theta(entry, theta)?,
                    parallel: true,
                });
            }
            out.push(ViewedSection {
                view: View::Sphere,
                section: entry.nu()?.clone(),
                parallel: true,
            });
            out.push(ViewedSection {
                view: View::Flat,
                section: catalog::twisted_section(entry)?,
                parallel: false,
            });
        }
        Family::Plane => out.push(ViewedSection {
            view: View::Flat,
            section: NormalSection::constant("e3", vec![0.0, 0.0, 1.0]),
            parallel: true,
        }),
        Family::UnitSphere => out.push(ViewedSection {
            view: View::Flat,
            section: NormalSection::position(),
            parallel: true,
        }),
        Family::Lorentz => {
            let m = imm.embedding_dim();
            let mut seed = vec![0.0; m];
            seed[2] = 1.0;
            let nu = projected_normal_frame(imm, View::Hyperbolic, vec![seed])?.remove(0);
            out.push(ViewedSection {
                view: View::Hyperbolic,
                section: nu.relabel("nu"),
                parallel: true,
            });
        }
        Family::Veronese => {
            let [n1, n2] = catalog::veronese_normal_frame();
            out.push(ViewedSection {
                view: View::Sphere,
                section: n1.clone(),
                parallel: false,
            });
            out.push(ViewedSection {
                view: View::Sphere,
                section: NormalSection::rotation(
                    "rotated(u+2v)",
                    n1,
                    n2,
                    Arc::new(|v: &[Jet3<f64>]| &v[0] + &v[1].scale(2.0)),
                ),
                parallel: false,
            });
        }
    }
    Ok(out)
}

fn parallel_sections(entry: &E) -> Result<Vec<ViewedSection>> {
    let all: Vec<ViewedSection> = sections(entry)?.into_iter().filter(|s| s.parallel).collect();
    if all.is_empty() {
        return Err(Error::Contract(format!(
            "{} has no parallel unit normal section in the catalog",
            entry.name
        )));
    }
    Ok(all)
}

fn tangent_part(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let imm = &ctx.entry.immersion;
    sections(&ctx.entry)?
        .iter()
        .map(|s| {
            let res = ctx.max_over(|p| {
                laplace::check_tangent_part(imm, s.view, &s.section, p).map(|c| c.residual)
            })?;
            let shape = ctx.max_over(|p| {
                laplace::check_tangent_part(imm, s.view, &s.section, p).map(|c| c.shape)
            })?;
            let grad = ctx.max_over(|p| {
                laplace::check_tangent_part(imm, s.view, &s.section, p).map(|c| c.gradient)
            })?;
            Ok(ctx.record(
                s.subject(),
                res,
                ctx.tol.derived,
                Expectation::Holds,
                details([("max_shape_term", shape), ("max_gradient_term", grad)]),
            ))
        })
        .collect()
}

fn n2eta(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let imm = &ctx.entry.immersion;
    parallel_sections(&ctx.entry)?
        .iter()
        .map(|s| {
            let res = ctx.max_over(|p| laplace::check_n2eta(imm, s.view, &s.section, p))?;
            Ok(ctx.record(s.subject(), res, ctx.tol.derived, Expectation::Holds, BTreeMap::new()))
        })
        .collect()
}

fn corol2(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let imm = &ctx.entry.immersion;
    let count = ctx.param_usize("killings", 5)?;
    let mut rng = ctx.rng(0x636f_726f);
    let mut out = Vec::new();
    for s in sections(&ctx.entry)? {
        let kind = match (s.view, imm.ambient()) {
            (View::Flat, AmbientSpace::Flat(_)) => View::Flat,
            (View::Hyperbolic, _) => View::Hyperbolic,
            _ => View::Sphere,
        };
        let fields: Vec<KillingField<f64>> = (0..count)
            .map(|_| random_killing(kind, imm.embedding_dim(), &mut rng))
            .collect();
        let mut worst = [0.0f64; 3];
        for v in &fields {
            let sw = |pick: fn(&laplace::PairingCheck<f64>) -> f64| {
                ctx.max_over(|p| {
                    laplace::check_killing_pairing(imm, s.view, &s.section, v, p, s.parallel)
                        .map(|c| pick(&c))
                })
            };
            worst[0] = worst[0].max(sw(|c| c.eq_a)?);
            worst[1] = worst[1].max(sw(|c| c.eq_lemma)?);
            if s.parallel {
                worst[2] = worst[2].max(sw(|c| c.eq_useful.unwrap_or(f64::NAN))?);
            }
        }
        let mut d = details([("eq_a", worst[0]), ("eq_lemma", worst[1])]);
        if s.parallel {
            d.insert("eq_useful".into(), worst[2]);
        }
        let res = worst.iter().fold(0.0f64, |a, &b| crate::scalar::nan_max(a, b));
        out.push(ctx.record(
            format!("{} x {count} Killing fields", s.subject()),
            res,
            ctx.tol.derived,
            Expectation::Holds,
            d,
        ));
    }
    Ok(out)
}

/// Unit eigenvectors `(a, b)` of the Simons matrix in the basis `{ν, μ}`
/// at the centre of the chart, as angles `θ = atan2(a, b)` so that the
/// section is `sin θ ν + cos θ μ`.
fn eigen_angles(entry: &E) -> Result<(Vec<f64>, Vec<f64>)> {
    let imm = &entry.immersion;
    let c = imm.domain().center();
    let frame = frame_at(imm, View::Flat, &c)?;
    let pj = imm.jets_at(&c)?;
    let nu: Vec<f64> = entry.nu()?.field().jets(&pj)?.iter().map(Jet3::value).collect();
    let sm = simons_matrix_in_basis(&frame, &[nu, frame.position.clone()])?;
    let eig = sm.eigen();
    let angles = eig
        .vectors
        .iter()
        .map(|v| v[0].atan2(v[1]).rem_euclid(PI))
        .collect();
    Ok((angles, eig.values))
}

fn sphere_hypersurface(ctx: &Ctx) -> Result<()> {
    ctx.entry.nu()?;
    Ok(())
}

fn euler_lagrange(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let entry = &ctx.entry;
    let imm = &entry.immersion;
    let el = |s: &NormalSection<f64>, view: View| {
        ctx.max_over(|p| laplace::euler_lagrange_residual(imm, view, s, p))
    };
    if let Some(theta) = ctx.param_f64("theta")? {
        let s = catalog::section_theta(entry, theta)?;
        let expect = if ctx.negative_control() {
            Expectation::Fails
        } else {
            Expectation::Holds
        };
        let tol = if ctx.negative_control() {
            ctx.tol.control
        } else {
            ctx.tol.derived
        };
        return Ok(vec![ctx.record(s.label(), el(&s, View::Flat)?, tol, expect, BTreeMap::new())]);
    }
    if entry.nu.is_none() {
        return parallel_sections(entry)?
            .iter()
            .map(|s| {
                Ok(ctx.record(
                    s.subject(),
                    el(&s.section, s.view)?,
                    ctx.tol.derived,
                    Expectation::Holds,
                    BTreeMap::new(),
                ))
            })
            .collect();
    }
    if ctx.negative_control() {
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..32 {
            let theta = PI * k as f64 / 32.0;
            let r = el(&catalog::section_theta(entry, theta)?, View::Flat)?;
            if r < best.0 {
                best = (r, theta);
            }
        }
        return Ok(vec![ctx.record(
            "best of 32 constant angles",
            best.0,
            ctx.tol.control,
            Expectation::Fails,
            details([("best_theta", best.1)]),
        )]);
    }
    let (angles, values) = eigen_angles(entry)?;
    angles
        .iter()
        .zip(&values)
        .map(|(&theta, &lambda)| {
            let s = catalog::section_theta(entry, theta)?;
            Ok(ctx.record(
                format!("Simons eigen-section {}", s.label()),
                el(&s, View::Flat)?,
                ctx.tol.derived,
                Expectation::Holds,
                details([("theta", theta), ("eigenvalue", lambda)]),
            ))
        })
        .collect()
}

fn thm3(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let entry = &ctx.entry;
    sphere_hypersurface(ctx)?;
    if ctx.negative_control() {
        return Err(Error::Contract(format!(
            "{} does not have parallel mean curvature vector",
            entry.name
        )));
    }
    let imm = &entry.immersion;
    let both = |s: &NormalSection<f64>| -> Result<(f64, f64)> {
        let h = ctx.max_over(|p| laplace::harmonicity_residual(imm, s, p))?;
        let d = ctx.max_over(|p| laplace::eigen_defect(imm, View::Flat, s, p))?;
        Ok((h, d))
    };
    if let Some(twist) = ctx.param_f64("twist")? {
        // survey of non-parallel sections; no claim either way
        let (angles, _) = eigen_angles(entry)?;
        let base = angles[0];
        let s = NormalSection::rotation(
            format!("theta={base}+{twist}*u0"),
            NormalSection::position(),
            entry.nu()?.clone(),
            Arc::new(move |v: &[Jet3<f64>]| v[0].scale(twist).add_scalar(base)),
        );
        let (h, d) = both(&s)?;
        return Ok(vec![ctx.record(
            s.label(),
            h,
            ctx.tol.derived,
            Expectation::Observe,
            details([("harmonicity", h), ("eigen_defect", d)]),
        )]);
    }
    let (angles, _) = eigen_angles(entry)?;
    let mut out = Vec::new();
    for &theta in &angles {
        let s = catalog::section_theta(entry, theta)?;
        let (h, d) = both(&s)?;
        out.push(ctx.record(
            format!("eigen-section {}", s.label()),
            h.max(d),
            ctx.tol.derived,
            Expectation::Holds,
            details([("harmonicity", h), ("eigen_defect", d), ("theta", theta)]),
        ));
    }
    let theta = angles[0] + FRAC_PI_4;
    let s = catalog::section_theta(entry, theta)?;
    let (h, d) = both(&s)?;
    out.push(ctx.record(
        format!("45-degree mixed section {}", s.label()),
        h.min(d),
        ctx.tol.derived,
        Expectation::Fails,
        details([("harmonicity", h), ("eigen_defect", d), ("theta", theta)]),
    ));
    Ok(out)
}

/// `H` and `‖S_ν‖²` measured at the chart centre.
fn centre_data(entry: &E) -> Result<(f64, f64)> {
    let imm = &entry.immersion;
    let c = imm.domain().center();
    let d = laplace::sphere_hypersurface_laplacian(imm, entry.nu()?, 0.0, &c, f64::INFINITY)?;
    Ok((d.mean_curvature, d.shape_norm2))
}

fn harm_theta(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    sphere_hypersurface(ctx)?;
    let entry = &ctx.entry;
    let imm = &entry.immersion;
    let n = entry.n() as f64;
    let harm = |theta: f64| -> Result<f64> {
        let s = catalog::section_theta(entry, theta)?;
        ctx.max_over(|p| laplace::harmonicity_residual(imm, &s, p))
    };
    let (h, s2) = centre_data(entry)?;
    let minimal = h.abs() <= ctx.tol.derived;
    let mut out = Vec::new();
    if let Some(theta) = ctx.param_f64("theta")? {
        let expect = if ctx.negative_control() {
            Expectation::Fails
        } else {
            Expectation::Holds
        };
        let tol = if ctx.negative_control() {
            ctx.tol.control
        } else {
            ctx.tol.derived
        };
        let identity = s2 - n * h * (1.0 / theta.tan() - theta.tan()) - n;
        out.push(ctx.record(
            format!("theta={theta}"),
            harm(theta)?,
            tol,
            expect,
            details([("identity_defect", identity.abs())]),
        ));
        return Ok(out);
    }
    for theta in [0.0, FRAC_PI_2] {
        let (expect, tol) = if minimal && !ctx.negative_control() {
            (Expectation::Holds, ctx.tol.derived)
        } else {
            (Expectation::Fails, ctx.tol.derived)
        };
        out.push(ctx.record(
            format!("theta={theta}"),
            harm(theta)?,
            tol,
            expect,
            details([("mean_curvature", h)]),
        ));
    }
    if minimal || ctx.negative_control() {
        return Ok(out);
    }
    let sol = catalog::solve_theta(entry.n(), h, s2 - n)?;
    for (label, theta) in [("theta1", sol.theta1), ("theta2", sol.theta2)] {
        out.push(ctx.record(
            format!("{label}={theta}"),
            harm(theta)?,
            ctx.tol.derived,
            Expectation::Holds,
            details([("solver_residual", sol.residual), ("theta", theta)]),
        ));
    }
    for delta in [-0.1, 0.1] {
        let theta = sol.theta1 + delta;
        out.push(ctx.record(
            format!("theta1{delta:+}={theta}"),
            harm(theta)?,
            ctx.tol.separation,
            Expectation::Fails,
            details([("theta", theta)]),
        ));
    }
    Ok(out)
}

fn lemmasphere(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    sphere_hypersurface(ctx)?;
    let entry = &ctx.entry;
    let imm = &entry.immersion;
    let nu = entry.nu()?;
    let thetas = match ctx.param_f64("theta")? {
        Some(t) => vec![t],
        None => vec![0.0, FRAC_PI_4, FRAC_PI_2, 2.0],
    };
    thetas
        .into_iter()
        .map(|theta| {
            let res = ctx.max_over(|p| {
                laplace::sphere_hypersurface_laplacian(imm, nu, theta, p, f64::INFINITY)
                    .map(|d| d.residual)
            })?;
            let c = imm.domain().center();
            let d = laplace::sphere_hypersurface_laplacian(imm, nu, theta, &c, f64::INFINITY)?;
            Ok(ctx.record(
                format!("theta={theta}"),
                res,
                ctx.tol.derived,
                Expectation::Holds,
                details([
                    ("nu_coeff", d.nu_coeff),
                    ("mu_coeff", d.mu_coeff),
                    ("grad_term_norm", linalg::norm(&d.grad_term)),
                ]),
            ))
        })
        .collect()
}

fn isorn(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let entry = &ctx.entry;
    let imm = &entry.immersion;
    let spectra: Vec<Vec<f64>> = {
        let mut v = Vec::with_capacity(ctx.plan.len());
        for p in &ctx.plan.points {
            v.push(simons_matrix(&frame_at(imm, View::Flat, p)?).eigen().values);
        }
        v
    };
    let r = spectra[0].len();
    let spread = (0..r)
        .map(|k| {
            let (lo, hi) = spectra
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                    (lo.min(s[k]), hi.max(s[k]))
                });
            hi - lo
        })
        .fold(0.0f64, f64::max);
    let centre = simons_matrix(&frame_at(imm, View::Flat, &imm.domain().center())?)
        .eigen()
        .values;
    let mut d: BTreeMap<String, f64> = centre
        .iter()
        .enumerate()
        .map(|(k, v)| (format!("eigenvalue[{k}]"), *v))
        .collect();
    d.insert("min_eigenvalue".into(), spectra.iter().flatten().cloned().fold(f64::INFINITY, f64::min));
    let (expect, tol) = if ctx.negative_control() {
        (Expectation::Fails, ctx.tol.spectrum)
    } else {
        (Expectation::Holds, ctx.tol.spectrum)
    };
    let mut out = vec![ctx.record("Simons spectrum spread", spread, tol, expect, d)];
    if entry.nu.is_some() && !ctx.negative_control() {
        let (angles, values) = eigen_angles(entry)?;
        for (&theta, &lambda) in angles.iter().zip(&values) {
            let s = catalog::section_theta(entry, theta)?;
            let res = ctx.max_over(|p| laplace::euler_lagrange_residual(imm, View::Flat, &s, p))?;
            out.push(ctx.record(
                format!("parallel eigen-section {}", s.label()),
                res,
                ctx.tol.derived,
                Expectation::Holds,
                details([("eigenvalue", lambda), ("theta", theta)]),
            ));
        }
    }
    Ok(out)
}

fn octonion(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let imm = &ctx.entry.immersion;
    let identity = ctx.max_over(|p| octonionic_laplacian_check(imm, p).map(|c| c.identity_residual))?;
    let eigenmap = ctx.max_over(|p| octonionic_laplacian_check(imm, p).map(|c| c.harmonic_residual))?;
    let grad_h = ctx.max_over(|p| octonionic_laplacian_check(imm, p).map(|c| c.grad_h))?;
    let (expect, tol) = if ctx.negative_control() {
        (Expectation::Fails, ctx.tol.control)
    } else {
        (Expectation::Holds, ctx.tol.derived)
    };
    Ok(vec![
        ctx.record(
            "full identity with the gradient term",
            identity,
            ctx.tol.derived,
            Expectation::Holds,
            BTreeMap::new(),
        ),
        ctx.record(
            "-Lap(gamma) = (|B|^2 + k - 1) gamma",
            eigenmap,
            tol,
            expect,
            details([("max_grad_h", grad_h)]),
        ),
    ])
}

fn nhs4(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    let entry = &ctx.entry;
    if entry.family != Family::Veronese {
        return Err(Error::Contract(format!(
            "the non-existence grid needs the Veronese surface, got {}",
            entry.name
        )));
    }
    let imm = &entry.immersion;
    let na = ctx.param_usize("alpha_count", 16)?;
    let nb = ctx.param_usize("beta_count", 16)?;
    if na == 0 || nb == 0 {
        return Err(Error::Usage("grid counts must be positive".into()));
    }
    let h = ctx.max_over(|p| Ok(linalg::norm(&frame_at(imm, View::Sphere, p)?.mean_curvature)))?;
    let b2 = ctx.max_over(|p| {
        Ok((frame_at(imm, View::Sphere, p)?.second_form_norm2() - 4.0 / 3.0).abs())
    })?;
    let rank = sweep(&ctx.plan, |p| {
        Ok(second_form_rank(&frame_at(imm, View::Sphere, p)?, 1e-8) as f64)
    })?
    .min();
    let [n1, n2] = catalog::veronese_normal_frame();
    let c1 = imm.domain().center()[0];
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..na {
        for j in 0..nb {
            let alpha = PI * i as f64 / na as f64;
            let beta = if nb == 1 {
                0.0
            } else {
                -1.5 + 3.0 * j as f64 / (nb - 1) as f64
            };
            let eta = NormalSection::rotation(
                "grid",
                n1.clone(),
                n2.clone(),
                Arc::new(move |v: &[Jet3<f64>]| v[0].add_scalar(-c1).scale(beta).add_scalar(alpha)),
            );
            let r = ctx.max_over(|p| laplace::harmonicity_residual(imm, &eta, p))?;
            if r < best.0 {
                best = (r, alpha, beta);
            }
        }
    }
    Ok(vec![
        ctx.record("minimality |H|", h, ctx.tol.structural, Expectation::Holds, BTreeMap::new()),
        ctx.record(
            "|B|^2 - 4/3",
            b2,
            ctx.tol.derived,
            Expectation::Holds,
            details([("min_second_form_rank", rank)]),
        ),
        ctx.record(
            format!("best of {na}x{nb} normal sections"),
            best.0,
            ctx.tol.separation,
            Expectation::Fails,
            details([("best_alpha", best.1), ("best_beta", best.2)]),
        ),
    ])
}

fn classification(ctx: &Ctx) -> Result<Vec<CheckRecord>> {
    sphere_hypersurface(ctx)?;
    let entry = &ctx.entry;
    if entry.n() != 2 {
        return Err(Error::Contract(format!(
            "the classification scan is for surfaces of S^3, got n = {}",
            entry.n()
        )));
    }
    let imm = &entry.immersion;
    let mut candidates: Vec<f64> = match ctx.param_f64("theta")? {
        Some(t) => vec![t],
        None => (0..32).map(|k| PI * k as f64 / 32.0).collect(),
    };
    let (h, s2) = centre_data(entry)?;
    let mut predicted = f64::NAN;
    if ctx.params.get("theta").is_none() {
        candidates.push(FRAC_PI_2);
        if h.abs() > ctx.tol.derived {
            if let Ok(sol) = catalog::solve_theta(2, h, s2 - 2.0) {
                predicted = sol.theta1;
                candidates.extend([sol.theta1, sol.theta2]);
            }
        }
    }
    let mut best = (f64::INFINITY, 0.0);
    for theta in candidates {
        let s = catalog::section_theta(entry, theta)?;
        let r = ctx.max_over(|p| laplace::harmonicity_residual(imm, &s, p))?;
        if r < best.0 {
            best = (r, theta);
        }
    }
    let (expect, tol) = if ctx.negative_control() {
        (Expectation::Fails, ctx.tol.control)
    } else {
        (Expectation::Holds, ctx.tol.derived)
    };
    let cot_tan = 1.0 / best.1.tan() - best.1.tan();
    Ok(vec![ctx.record(
        "best constant-angle section",
        best.0,
        tol,
        expect,
        details([
            ("best_theta", best.1),
            ("predicted_theta1", predicted),
            ("cot_minus_tan", cot_tan),
            ("mean_curvature", h),
        ]),
    )])
}
