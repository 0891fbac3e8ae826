use std::path::Path;

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Deserialize;
use serde_json::{json, Value};

use sak_core::arith::poly::{bigint_to_json, IntLiteral};
use sak_core::arith::Rational;
use sak_core::bhc::{bhc_scan, write_csv, CurveJson, RationalCurve};
use sak_core::chern::{
    abelian_form_matrix, integrate_top_power, kernel_rank, toric_form_matrix, FlatAbelianData, FormMatrix,
    QuadratureParams, TopPowerInput, ToricScale, TorusPointC,
};
use sak_core::chow::{
    alpha_and_siu, beta_gamma_eval, toric_intersection_degree, toric_intersection_degree_by_ring, AbelianDegreeJson,
    AbelianMap, BetaGammaInput, ChowClass, Which,
};
use sak_core::heights::{
    abelian_model_height, cover_grid, graph_height_with_denominator, height_cone_member, toric_canonical_height,
    AlgebraicJson, Certified, CoordKind, ModelPoint, TorusPoint,
};
use sak_core::linalg::RatMatrix;
use sak_core::semiabelian::{
    ext_to_json, is_homomorphism_pair, realizable_pair, DescriptorJson, HomPairJson, SemiabelianDescriptor,
};

use crate::output::{emit, parse_json, read_json, CliError};
use crate::{
    AlphaArgs, BetaGammaArgs, BhcArgs, ChowArgs, Cli, Command, FormArgs, HomCheckArgs, InputArgs, QuadratureArgs,
    RealizeArgs, WhichArg,
};

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let value = match &cli.command {
        Command::Realize(a) => realize(a)?,
        Command::HomCheck(a) => hom_check(a)?,
        Command::Chow(a) => chow(a)?,
        Command::BetaGamma(a) => beta_gamma(a)?,
        Command::Alpha(a) => alpha(a)?,
        Command::Height(a) => height(a)?,
        Command::Cone(a) => cone(a)?,
        Command::Cover(a) => cover(a)?,
        Command::Form(a) => form(a, cli.seed)?,
        Command::Quadrature(a) => quadrature(a)?,
        Command::Bhc(a) => bhc(a)?,
    };
    emit(&value, cli.output.as_deref())
}

fn load_descriptor(path: &Path) -> Result<SemiabelianDescriptor, CliError> {
    read_json::<DescriptorJson>(path)?
        .into_descriptor()
        .map_err(CliError::invariant)
}

fn realize(a: &RealizeArgs) -> Result<Value, CliError> {
    let g = load_descriptor(&a.model)?;
    let pair = read_json::<HomPairJson>(&a.pair)?
        .into_pair(&g)
        .map_err(CliError::invariant)?;
    let t_prime = a.t_prime.unwrap_or(pair.phi_tor.rows());
    let witness = realizable_pair(&g, t_prime, &pair)?;
    Ok(json!({
        "realizable": witness.is_some(),
        "witness": witness.as_ref().map_or(Value::Null, ext_to_json),
    }))
}

fn hom_check(a: &HomCheckArgs) -> Result<Value, CliError> {
    let g = load_descriptor(&a.model)?;
    let gp = load_descriptor(&a.target)?;
    let pair = read_json::<HomPairJson>(&a.pair)?
        .into_pair(&g)
        .map_err(CliError::invariant)?;
    Ok(json!({ "homomorphism": is_homomorphism_pair(&g, &gp, &pair)? }))
}

fn integer_matrix(text: &str) -> Result<(Vec<Vec<BigInt>>, usize), CliError> {
    let raw: Vec<Vec<IntLiteral>> = parse_json(text, "--matrix")?;
    let rows = raw
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| x.into_bigint::<serde_json::Error>())
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Schema(format!("--matrix: {e}")))?;
    let t = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| CliError::Invariant("--matrix needs at least one row".into()))?;
    if let Some(i) = rows.iter().position(|r| r.len() != t) {
        return Err(CliError::Invariant(format!(
            "--matrix row {i} has {} entries, expected {t}",
            rows[i].len()
        )));
    }
    Ok((rows, t))
}

fn chow(a: &ChowArgs) -> Result<Value, CliError> {
    let (m, t) = integer_matrix(&a.matrix)?;
    let d = if a.by_ring {
        toric_intersection_degree_by_ring(&m, t, a.s)?
    } else {
        toric_intersection_degree(&m, t, a.s)?
    };
    Ok(json!({ "degree": bigint_to_json(&d) }))
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum AbelianMapJson {
    Matrix(RatMatrix),
    Class { class: Vec<Rational>, norm: Rational },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaGammaJson {
    phi_tor: RatMatrix,
    phi_ab: AbelianMapJson,
    toric_cycle: ChowClass,
    abelian: AbelianDegreeJson,
}

fn beta_gamma(a: &BetaGammaArgs) -> Result<Value, CliError> {
    let j: BetaGammaJson = read_json(&a.input)?;
    let input = BetaGammaInput {
        phi_tor: j.phi_tor,
        phi_ab: match j.phi_ab {
            AbelianMapJson::Matrix(m) => AbelianMap::Matrix(m),
            AbelianMapJson::Class { class, norm } => AbelianMap::Class { class, norm },
        },
        toric_cycle: j.toric_cycle,
        abelian: j.abelian.into_data().map_err(CliError::invariant)?,
    };
    let (which, name) = match a.which {
        WhichArg::Beta => (Which::Beta, "beta"),
        WhichArg::Gamma => (Which::Gamma, "gamma"),
    };
    let v = beta_gamma_eval(&input, a.i, which)?;
    Ok(json!({ "i": a.i, "value": v, "which": name }))
}

fn parse_bigint(s: &str, flag: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Schema(format!("{flag}: `{s}` is not an integer")))
}

fn alpha(a: &AlphaArgs) -> Result<Value, CliError> {
    let r = alpha_and_siu(
        &parse_bigint(&a.deg1, "--deg1")?,
        &parse_bigint(&a.deg2, "--deg2")?,
        a.r,
    )?;
    Ok(json!({
        "alpha": r.alpha,
        "siu_holds": r.siu_holds,
        "trivial": r.trivial,
        "u": bigint_to_json(&r.u),
        "v": bigint_to_json(&r.v),
    }))
}

fn certified(c: Certified) -> Value {
    json!({ "error": c.error, "value": c.value })
}

fn torus_point(coords: Vec<AlgebraicJson>) -> Result<TorusPoint, CliError> {
    let numbers = coords
        .into_iter()
        .map(AlgebraicJson::into_number)
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::invariant)?;
    TorusPoint::new(numbers).map_err(CliError::invariant)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HeightJson {
    torus: Vec<AlgebraicJson>,
    #[serde(default)]
    phi_tor: Option<RatMatrix>,
    #[serde(default)]
    denominator: Option<u64>,
    #[serde(default)]
    abelian: Option<Vec<Rational>>,
    #[serde(default)]
    gram: Option<RatMatrix>,
}

fn height(a: &InputArgs) -> Result<Value, CliError> {
    let j: HeightJson = read_json(&a.input)?;
    let x = torus_point(j.torus)?;
    let toric = match &j.phi_tor {
        Some(phi) => graph_height_with_denominator(phi, &x, j.denominator)?,
        None => toric_canonical_height(&x)?,
    };
    let abelian = match (&j.gram, &j.abelian) {
        (Some(g), Some(p)) => Some(abelian_model_height(g, p)?),
        (None, None) => None,
        _ => return Err(CliError::Invariant("abelian and gram must be given together".into())),
    };
    let total = match &abelian {
        Some(q) => toric.add(Certified {
            value: q.to_f64(),
            error: q.to_f64().abs() * 1e-15,
        }),
        None => toric,
    };
    Ok(json!({
        "abelian": abelian,
        "toric": certified(toric),
        "total": certified(total),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelPointJson {
    torus: Vec<AlgebraicJson>,
    #[serde(default)]
    abelian: Vec<Rational>,
}

impl ModelPointJson {
    fn into_point(self) -> Result<ModelPoint, CliError> {
        Ok(ModelPoint {
            torus: torus_point(self.torus)?,
            abelian: self.abelian,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeJson {
    sigma: Vec<ModelPointJson>,
    epsilon: Rational,
    point: ModelPointJson,
    gram: RatMatrix,
}

fn cone(a: &InputArgs) -> Result<Value, CliError> {
    let j: ConeJson = read_json(&a.input)?;
    let sigma = j
        .sigma
        .into_iter()
        .map(ModelPointJson::into_point)
        .collect::<Result<Vec<_>, _>>()?;
    let x = j.point.into_point()?;
    Ok(json!({ "member": height_cone_member(&sigma, &j.epsilon, &x, &j.gram)? }))
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum KindJson {
    Toric,
    Abelian,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverJson {
    bounds: Vec<[Rational; 2]>,
    kinds: Vec<KindJson>,
    delta: Rational,
    n: u64,
}

fn cover(a: &InputArgs) -> Result<Value, CliError> {
    let j: CoverJson = read_json(&a.input)?;
    let bounds: Vec<(Rational, Rational)> = j.bounds.into_iter().map(|[lo, hi]| (lo, hi)).collect();
    let kinds: Vec<CoordKind> = j
        .kinds
        .into_iter()
        .map(|k| match k {
            KindJson::Toric => CoordKind::Toric,
            KindJson::Abelian => CoordKind::Abelian,
        })
        .collect();
    let points = cover_grid(&bounds, &kinds, &j.delta, j.n)?;
    Ok(json!({ "count": points.len(), "points": points }))
}

fn complex_matrix(rows: &[Vec<[f64; 2]>], what: &str) -> Result<DMatrix<Complex<f64>>, CliError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Invariant(format!("{what}: rows have different lengths")));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| {
        Complex::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn real_matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, CliError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(CliError::Invariant(format!("{what}: rows have different lengths")));
    }
    Ok(DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

#[derive(Deserialize, Default, Clone, Copy)]
#[serde(rename_all = "snake_case")]
enum ScaleJson {
    #[default]
    Degree,
    Displayed,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormAbelianJson {
    hermitian: Vec<Vec<[f64; 2]>>,
    /// Real `2g' x 2g` lift.
    lift: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormJson {
    phi_tor: Vec<Vec<f64>>,
    z: Vec<[f64; 2]>,
    #[serde(default)]
    scale: ScaleJson,
    #[serde(default = "one")]
    toric_weight: f64,
    #[serde(default)]
    abelian: Option<FormAbelianJson>,
}

fn form(a: &FormArgs, seed: u64) -> Result<Value, CliError> {
    let j: FormJson = read_json(&a.input)?;
    let z =
        TorusPointC::new(j.z.iter().map(|[re, im]| Complex::new(*re, *im)).collect()).map_err(CliError::invariant)?;
    let scale = match j.scale {
        ScaleJson::Degree => ToricScale::Degree,
        ScaleJson::Displayed => ToricScale::Displayed,
    };
    let abelian = match &j.abelian {
        Some(ab) => {
            let data =
                FlatAbelianData::new(complex_matrix(&ab.hermitian, "hermitian")?, 1.0).map_err(CliError::invariant)?;
            Some(abelian_form_matrix(&data, &real_matrix(&ab.lift, "lift")?)?)
        }
        None => None,
    };
    let build = |z: &TorusPointC| -> Result<FormMatrix, CliError> {
        let tor = toric_form_matrix(&j.phi_tor, z, scale)?.scale(j.toric_weight);
        Ok(match &abelian {
            Some(ab) => tor.direct_sum(ab),
            None => tor,
        })
    };
    let g = build(&z)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(a.samples);
    for _ in 0..a.samples {
        let lambda: Vec<f64> = (0..z.dim()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let theta: Vec<f64> = (0..z.dim())
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        let y = TorusPointC::from_log(&lambda, &theta);
        samples.push(kernel_rank(&build(&y.mul(&z)?)?, a.tol)?);
    }
    let m = g.matrix();
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    Ok(json!({
        "complex_dim": g.complex_dim(),
        "kernel_rank": kernel_rank(&g, a.tol)?,
        "matrix": rows,
        "min_eigenvalue": g.min_eigenvalue(),
        "samples": samples,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadratureAbelianJson {
    hermitian: Vec<Vec<[f64; 2]>>,
    covolume: f64,
    /// Complex-linear `g' x g` lift.
    lift: Vec<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadratureJson {
    phi_tor: Vec<Vec<f64>>,
    #[serde(default)]
    t: Option<usize>,
    #[serde(default)]
    abelian: Option<QuadratureAbelianJson>,
    #[serde(default = "one")]
    toric_weight: f64,
    s1: usize,
    s2: usize,
}

fn quadrature(a: &QuadratureArgs) -> Result<Value, CliError> {
    let j: QuadratureJson = read_json(&a.input)?;
    let t =
        j.t.or_else(|| j.phi_tor.first().map(Vec::len))
            .ok_or_else(|| CliError::Invariant("t is required when phi_tor has no rows".into()))?;
    let abelian = match &j.abelian {
        Some(ab) => Some((
            FlatAbelianData::new(complex_matrix(&ab.hermitian, "hermitian")?, ab.covolume)
                .map_err(CliError::invariant)?,
            complex_matrix(&ab.lift, "lift")?,
        )),
        None => None,
    };
    let input = TopPowerInput {
        phi_tor: j.phi_tor,
        t,
        abelian,
        toric_weight: j.toric_weight,
        s1: j.s1,
        s2: j.s2,
    };
    let params = QuadratureParams {
        tol: a.tol,
        ..QuadratureParams::default()
    };
    let report = integrate_top_power(&input, &params)?;
    Ok(serde_json::to_value(report).expect("serializable"))
}

fn bhc(a: &BhcArgs) -> Result<Value, CliError> {
    let curve = RationalCurve::from_json(read_json::<CurveJson>(&a.curve)?).map_err(CliError::invariant)?;
    let report = bhc_scan(&curve, a.bound)?;
    if let Some(path) = &a.out {
        let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        write_csv(&report.records, file)?;
    }
    let skipped: Vec<Value> = report
        .skipped
        .iter()
        .map(|(a, d)| json!({ "a": a, "degree": d }))
        .collect();
    Ok(json!({
        "anomalous": report.anomalous,
        "bound": report.bound,
        "max_height": report.max_height,
        "points": report.records.len(),
        "relations": report.relations,
        "skipped": skipped,
        "whole_curve": report.whole_curve,
    }))
}
