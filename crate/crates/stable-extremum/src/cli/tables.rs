//! Benchmark tables for the supremum cdf and the joint cdf, with reference values
//! quoted to the digits published alongside the method.

use std::sync::OnceLock;
use std::time::Instant;

use crate::charexp::{ScaleConvention, StableParams};
use crate::distributions::{cpdf_sup_many, cpdf_sup_variant, joint_v1_many, EvalRequest, GridVariant, Method};
use crate::error::{Error, Result};

/// Skewness shared by every table.
pub const TABLE_BETA: f64 = -0.2;

#[derive(Debug, Clone)]
pub struct Series {
    pub mu: f64,
    pub reference: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum Layout {
    /// `P[X̄_T ≤ a]` at the listed `a`.
    Sup(Vec<f64>),
    /// `V₁ = P[X_T ≤ a₁, X̄_T > a₂]`; rows `a₂`, columns `a₁ - a₂`, row-major references.
    Joint { a2: Vec<f64>, a12: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct TableSpec {
    pub id: u8,
    pub alpha: f64,
    pub t: f64,
    pub layout: Layout,
    pub series: Vec<Series>,
}

impl TableSpec {
    /// Drift-asymmetric index below one: only real `q` are admissible and the
    /// tables report the spread between two grid layouts.
    pub fn cross_check(&self) -> bool {
        self.alpha < 1.0 && self.series.iter().any(|s| s.mu != 0.0)
    }

    pub fn default_method(&self) -> Method {
        if self.cross_check() {
            Method::Gwr
        } else {
            Method::SinhBromwich
        }
    }

    /// Largest admissible `abs_error` (or spread, for cross-checked tables).
    pub fn gate(&self, method: Method) -> f64 {
        if self.cross_check() {
            return 1e-6;
        }
        match (method, matches!(self.layout, Layout::Joint { .. })) {
            (Method::SinhBromwich, false) => 1e-9,
            (Method::SinhBromwich, true) => 1e-8,
            // GWR in double precision stalls near 3e-5 (supremum) and 5e-4 (joint) for index above one
            (_, false) if self.alpha > 1.0 => 1e-4,
            (_, true) if self.alpha > 1.0 => 1e-3,
            _ => 5e-6,
        }
    }

    pub fn point_labels(&self) -> Vec<String> {
        match &self.layout {
            Layout::Sup(a) => a.iter().map(|a| format!("a={a}")).collect(),
            Layout::Joint { a2, a12 } => a2
                .iter()
                .flat_map(|r| a12.iter().map(move |c| format!("a2={r};a1-a2={c}")))
                .collect(),
        }
    }
}

const A_SMALL: [f64; 6] = [0.0125, 0.025, 0.0375, 0.05, 0.0625, 0.075];
const A12: [f64; 5] = [-0.075, -0.05, -0.0375, -0.025, -0.0125];

fn sup(id: u8, alpha: f64, t: f64, a: &[f64], series: Vec<Series>) -> TableSpec {
    TableSpec { id, alpha, t, layout: Layout::Sup(a.to_vec()), series }
}

fn one(mu: f64, r: &[f64]) -> Series {
    Series { mu, reference: r.to_vec() }
}

pub fn table(id: u8) -> Result<TableSpec> {
    let t = match id {
        1 => sup(
            1,
            1.2,
            0.25,
            &A_SMALL,
            vec![one(
                -0.02,
                &[0.13205969881037, 0.238098430142687, 0.339453622131327, 0.435754264935413, 0.524541403377567, 0.603375861525033],
            )],
        ),
        2 => sup(
            2,
            0.2,
            0.25,
            &A_SMALL,
            vec![one(
                0.0,
                &[0.86237781819448, 0.878170612170767, 0.88666389300912, 0.89237116393858, 0.896621627560969, 0.899982988799815],
            )],
        ),
        3 => sup(
            3,
            0.2,
            0.25,
            &A_SMALL,
            vec![
                one(
                    -0.02,
                    &[0.86655235942346, 0.880193992524779, 0.887966922215758, 0.893319578600464, 0.897361066299498, 0.900585519405344],
                ),
                one(
                    0.02,
                    &[0.383040817220745, 0.870818882637881, 0.882207367996254, 0.889280791200528, 0.894277943437897, 0.898108725916215],
                ),
            ],
        ),
        4 => sup(
            4,
            0.2,
            0.004,
            &A_SMALL,
            vec![
                one(
                    -0.02,
                    &[0.997491210718175, 0.997814652512808, 0.997984358113175, 0.998096768145159, 0.998179648593157, 0.998244693044529],
                ),
                one(
                    0.02,
                    &[0.997491211642771, 0.99781465327481, 0.997984358783901, 0.99809676872475, 0.998179649128261, 0.998244693506221],
                ),
            ],
        ),
        5 => sup(
            5,
            0.2,
            1.0,
            &[100.0, 200.0, 300.0, 400.0, 500.0, 600.0],
            vec![
                one(
                    -0.02,
                    &[0.90467837424503, 0.916070201834554, 0.922144074014908, 0.926205338569077, 0.929219523163341, 0.931596967461542],
                ),
                one(
                    0.02,
                    &[0.904671590132716, 0.916067179091704, 0.922142699482402, 0.926203995172241, 0.929218489731696, 0.931596132973088],
                ),
            ],
        ),
        6 => sup(
            6,
            0.2,
            10.0,
            &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
            vec![one(
                0.0,
                &[0.31071084287788, 0.32976167923584, 0.341569702301114, 0.3502636252052, 0.357194432515148, 0.362981755403084],
            )],
        ),
        7 => TableSpec {
            id: 7,
            alpha: 1.2,
            t: 0.25,
            layout: Layout::Joint { a2: A_SMALL.to_vec(), a12: A12.to_vec() },
            series: vec![one(
                -0.02,
                &[
                    0.12244233311163, 0.157907371799232, 0.181683980001225, 0.210889139495737, 0.246912884013257,
                    0.0918916219424353, 0.120389641188601, 0.140202136800179, 0.165401766901898, 0.197967194459645,
                    0.0692609560212789, 0.0918389965351731, 0.108011387880229, 0.129210336122806, 0.157781151351146,
                    0.0521567547065453, 0.06974459359541, 0.0826439620684098, 0.099983838478999, 0.124230282077777,
                    0.0393164899603866, 0.0528386851043925, 0.0629314657230151, 0.0767702363595711, 0.0967218956392104,
                    0.0297971711410534, 0.0401248577840783, 0.0479246215441564, 0.0587741609274394, 0.0747900267865678,
                ],
            )],
        },
        8 => TableSpec {
            id: 8,
            alpha: 0.2,
            t: 0.25,
            layout: Layout::Joint { a2: A_SMALL.to_vec(), a12: A12.to_vec() },
            series: vec![one(
                0.0,
                &[
                    0.00682358422697427, 0.00705249804952593, 0.00720455195463735, 0.00740278409139612, 0.00769492446912139,
                    0.00558447991435967, 0.00574082324058917, 0.00584237670326238, 0.00597177710600839, 0.00615563177428208,
                    0.00494072158394288, 0.00506309108194094, 0.0051414907517235, 0.00524002286520389, 0.00537705594316782,
                    0.00451892651994965, 0.00462072587777185, 0.00468530333674396, 0.00476567446164324, 0.00487579384718796,
                    0.0042111823310130, 0.004298919274522, 0.00435414844090055, 0.00442236983151984, 0.00451478766166025,
                    0.0039720388807442, 0.00404944263994188, 0.00409786185433674, 0.00415730883426692, 0.00423711210468661,
                ],
            )],
        },
        _ => return Err(Error::Config(format!("table id {id} outside 1..8"))),
    };
    Ok(t)
}

/// Scale normalization shared by all tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub convention: ScaleConvention,
    pub scale: f64,
    /// `|value - reference|` at the calibration point.
    pub residual: f64,
}

impl Calibration {
    pub fn params(&self, alpha: f64, mu: f64) -> Result<StableParams> {
        StableParams::from_beta(alpha, TABLE_BETA, self.scale, mu, self.convention)
    }
}

/// One candidate of the calibration search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub convention: ScaleConvention,
    pub scale: f64,
    pub fitted: bool,
    pub residual: f64,
}

const CALIBRATION_EPS: f64 = 1e-12;

fn first_point_value(conv: ScaleConvention, scale: f64) -> Result<f64> {
    let t1 = table(1)?;
    let Layout::Sup(a) = &t1.layout else { unreachable!() };
    let p = StableParams::from_beta(t1.alpha, TABLE_BETA, scale, t1.series[0].mu, conv)?;
    let req = EvalRequest::new(p, t1.t, Method::SinhBromwich, CALIBRATION_EPS)?;
    Ok(cpdf_sup_many(&req, 0.0, &a[..1])?[0])
}

/// Unit scale under the two fixed normalizations, then the scale fitted under the
/// `σ` convention so the first value of table 1 is matched.
pub fn calibration_candidates() -> Result<Vec<Candidate>> {
    let target = table(1)?.series[0].reference[0];
    let mut out = Vec::new();
    for conv in [ScaleConvention::SumOne, ScaleConvention::AbsCOne] {
        let v = first_point_value(conv, 1.0)?;
        out.push(Candidate { convention: conv, scale: 1.0, fitted: false, residual: (v - target).abs() });
    }
    let f = |s: f64| first_point_value(ScaleConvention::Sigma, s).map(|v| v - target);
    // the probability falls as the scale grows; Illinois false position on a bracket
    let (mut lo, mut hi) = (0.05, 1.0);
    let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
    if flo * fhi > 0.0 {
        return Err(Error::Tolerance("calibration target not bracketed".into()));
    }
    let mut s = lo;
    let mut side = 0i8;
    for _ in 0..100 {
        s = (lo * fhi - hi * flo) / (fhi - flo);
        let fs = f(s)?;
        if fs == 0.0 || (hi - lo).abs() < 1e-15 * s || fs.abs() < 1e-15 {
            break;
        }
        if fs * fhi < 0.0 {
            lo = hi;
            flo = fhi;
            hi = s;
            fhi = fs;
            side = 0;
        } else {
            hi = s;
            fhi = fs;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    out.push(Candidate { convention: ScaleConvention::Sigma, scale: s, fitted: true, residual: f(s)?.abs() });
    Ok(out)
}

/// Runs the calibration once per process and keeps the best candidate.
pub fn calibration_report() -> Result<(Calibration, Vec<Candidate>)> {
    static LOCK: OnceLock<std::result::Result<(Calibration, Vec<Candidate>), Error>> = OnceLock::new();
    LOCK.get_or_init(|| {
        let c = calibration_candidates()?;
        let best = c.iter().min_by(|a, b| a.residual.total_cmp(&b.residual)).unwrap();
        let cal = Calibration { convention: best.convention, scale: best.scale, residual: best.residual };
        Ok((cal, c))
    })
    .clone()
}

pub fn calibration() -> Result<Calibration> {
    Ok(calibration_report()?.0)
}

/// Writes the calibration outcome, one line per candidate.
pub fn calibration_candidates_logged(err: &mut dyn std::io::Write) -> Result<()> {
    let (cal, cands) = calibration_report()?;
    for c in &cands {
        let _ = writeln!(
            err,
            "calibration candidate {:?} scale {:.15} ({}) residual {:.3e}",
            c.convention,
            c.scale,
            if c.fitted { "fitted" } else { "fixed" },
            c.residual
        );
    }
    let _ = writeln!(err, "calibration locked: {:?} scale {:.15}", cal.convention, cal.scale);
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub table: u8,
    pub point: String,
    pub value: f64,
    pub reference: f64,
    /// `|value - reference|`, or the spread between grid layouts for cross-checked tables.
    pub abs_error: f64,
    pub cpu_ms: f64,
    pub metric: &'static str,
}

pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub gate: f64,
}

impl BenchReport {
    pub fn worst(&self) -> f64 {
        self.rows.iter().filter(|r| r.metric != "calibrated").map(|r| r.abs_error).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.worst() <= self.gate
    }
}

pub fn bench_table(id: u8, method: Option<Method>, eps: f64) -> Result<BenchReport> {
    let spec = table(id)?;
    let method = method.unwrap_or_else(|| spec.default_method());
    let cal = calibration()?;
    let labels = spec.point_labels();
    let mut rows = Vec::new();
    for s in &spec.series {
        let req = EvalRequest::new(cal.params(spec.alpha, s.mu)?, spec.t, method, eps)?;
        let prefix = if spec.series.len() > 1 { format!("mu={};", s.mu) } else { String::new() };
        let t0 = Instant::now();
        let (values, spread) = match &spec.layout {
            Layout::Sup(a) => {
                let v = cpdf_sup_many(&req, 0.0, a)?;
                let spread = if spec.cross_check() {
                    let w = cpdf_sup_variant(&req, 0.0, a, GridVariant::alternate())?;
                    Some(v.iter().zip(&w).map(|(x, y)| (x - y).abs()).collect::<Vec<_>>())
                } else {
                    None
                };
                (v, spread)
            }
            Layout::Joint { a2, a12 } => {
                let cells: Vec<(f64, f64)> = a2.iter().flat_map(|&r| a12.iter().map(move |&c| (r + c, r))).collect();
                (joint_v1_many(&req, 0.0, &cells)?, None)
            }
        };
        let per_point = t0.elapsed().as_secs_f64() * 1e3 / values.len() as f64;
        for (k, (&v, &r)) in values.iter().zip(&s.reference).enumerate() {
            let (abs_error, metric) = match &spread {
                Some(d) => (d[k], "cross_diff"),
                None if id == 1 && k == 0 => ((v - r).abs(), "calibrated"),
                None => ((v - r).abs(), "abs_error"),
            };
            rows.push(BenchRow {
                table: id,
                point: format!("{prefix}{}", labels[k]),
                value: v,
                reference: r,
                abs_error,
                cpu_ms: per_point,
                metric,
            });
        }
    }
    Ok(BenchReport { rows, gate: spec.gate(method) })
}
