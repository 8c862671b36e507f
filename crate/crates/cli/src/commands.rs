use std::collections::BTreeMap;

use homdyn::bfgroup::{bf_group, BfElement};
use homdyn::freegroup::Endomorphism;
use homdyn::graphmap::{
    periodic_points_bounded, sigma_report, CoverPoint, TightMap, DEFAULT_ITINERARY_BUDGET,
};
use homdyn::intlinalg::{rat_inverse, spectral, IntMatrix, NormRegistry};
use homdyn::rotation::rotation_set_bounded;
use homdyn::rotation::DEFAULT_LOOP_BUDGET;
use homdyn::semiconj::{
    beta_breakpoints, holder_bound, shadow_pairs_with, InjectivityStatus, DEFAULT_NODE_BUDGET,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::dsl::{gen_char, Item};
use crate::emit::{int, ints, opt_rat, rat, rats, to_csv, to_json, tuple};
use crate::svg::{pt, Figure};
use crate::CliError;

/// Rendered result of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub svg: Option<String>,
    /// The command reached no verdict (exit code 2).
    pub unknown: bool,
}

impl Report {
    fn text(body: String) -> Self {
        Self { body, svg: None, unknown: false }
    }
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, item: &Item, cfg: &RunConfig) -> Result<Report, CliError>;
}

pub struct Registry {
    commands: BTreeMap<&'static str, Box<dyn Command>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Self { commands: BTreeMap::new() };
        r.register(Box::new(Analyze));
        r.register(Box::new(Bf));
        r.register(Box::new(Fix));
        r.register(Box::new(Torus));
        r.register(Box::new(RotSet));
        r.register(Box::new(Beta));
        r.register(Box::new(Shadow));
        r
    }
}

impl Registry {
    pub fn register(&mut self, c: Box<dyn Command>) {
        self.commands.insert(c.name(), c);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.get(name).map(|c| c.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Command> + '_ {
        self.commands.values().map(|c| c.as_ref())
    }
}

fn tight_map(item: &Item, command: &str) -> Result<TightMap, CliError> {
    match item {
        Item::Map(spec) => Ok(TightMap::new(spec.endomorphism()).map_err(homdyn::Error::from)?),
        Item::Matrix(m) => Err(CliError::Input(format!("`{command}` needs a map, `{}` is a matrix", m.name))),
    }
}

fn matrix_of(item: &Item) -> IntMatrix {
    match item {
        Item::Map(spec) => spec.endomorphism().abelianize(),
        Item::Matrix(m) => m.matrix.clone(),
    }
}

fn matrix_json(a: &IntMatrix) -> Value {
    Value::Array((0..a.dim()).map(|i| ints(a.row(i))).collect())
}

fn gen_header(prefix: &str, b: usize) -> Vec<String> {
    (0..b).map(|i| format!("{prefix}_{}", gen_char(i))).collect()
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn element_class(e: &BfElement) -> String {
    tuple(e.canonical())
}

fn check_k(cfg: &RunConfig) -> Result<u32, CliError> {
    if cfg.k == 0 {
        return Err(CliError::Input("--k must be at least 1".into()));
    }
    Ok(cfg.k)
}

pub struct Analyze;

impl Command for Analyze {
    fn name(&self) -> &'static str {
        "analyze"
    }

    fn about(&self) -> &'static str {
        "matrix, characteristic polynomial, spectrum, sigma constants and Holder bound (JSON)"
    }

    fn run(&self, item: &Item, _cfg: &RunConfig) -> Result<Report, CliError> {
        let a = matrix_of(item);
        let s = spectral(&a);
        let eigenvalues: Vec<Value> = s
            .eigenvalues
            .iter()
            .map(|e| {
                json!({
                    "re": e.value.re,
                    "im": e.value.im,
                    "radius": e.radius,
                    "exact": e.exact.as_ref().map(int),
                })
            })
            .collect();
        let mut out = json!({
            "name": item.name(),
            "kind": match item { Item::Map(_) => "map", Item::Matrix(_) => "matrix" },
            "rank": a.dim(),
            "matrix": matrix_json(&a),
            "charpoly": ints(&s.charpoly.coeffs_descending()),
            "eigenvalues": eigenvalues,
            "epsilon": s.epsilon(),
            "is_expanding": s.is_expanding,
            "has_root_of_unity": s.has_root_of_unity,
            "lambda_lower": opt_rat(s.lambda_lower.as_ref()),
            "norm_data": s.norm_data.as_ref().map(|d| d.to_string()),
        });
        if let Item::Map(spec) = item {
            let m = tight_map(item, self.name())?;
            let endo: &Endomorphism = m.endo();
            let sigma = if s.is_expanding {
                let r = sigma_report(&m).map_err(homdyn::Error::from)?;
                json!({
                    "c": rat(&r.c),
                    "c_sup": rat(&r.c_sup),
                    "lambda": rat(&r.lambda),
                    "delta": rat(&r.delta),
                    "lambda_sup": opt_rat(r.lambda_sup.as_ref()),
                    "delta_sup": opt_rat(r.delta_sup.as_ref()),
                    "norm": r.norm,
                })
            } else {
                Value::Null
            };
            let holder = if s.is_expanding {
                let h = holder_bound(&m).map_err(homdyn::Error::from)?;
                json!({
                    "value": h.value,
                    "exact": opt_rat(h.exact.as_ref()),
                    "lambda": rat(&h.lambda),
                    "lipschitz": h.lipschitz,
                })
            } else {
                Value::Null
            };
            let obj = out.as_object_mut().expect("object");
            obj.insert("map".into(), Value::String(endo.to_string()));
            obj.insert("source".into(), Value::String(spec.to_string()));
            obj.insert("speeds".into(), json!(m.speeds()));
            obj.insert("lipschitz".into(), json!(m.lipschitz()));
            obj.insert("uniform_expansion".into(), json!(endo.uniform_expansion()));
            obj.insert("sigma".into(), sigma);
            obj.insert("holder".into(), holder);
        }
        Ok(Report::text(to_json(&out)))
    }
}

pub struct Bf;

impl Command for Bf {
    fn name(&self) -> &'static str {
        "bf"
    }

    fn about(&self) -> &'static str {
        "Bowen-Franks groups BF_1 .. BF_k (JSON or CSV)"
    }

    fn run(&self, item: &Item, cfg: &RunConfig) -> Result<Report, CliError> {
        let k = check_k(cfg)?;
        let a = matrix_of(item);
        let groups = (1..=k)
            .map(|j| bf_group(&a, j).map_err(|e| CliError::Core(e.into())))
            .collect::<Result<Vec<_>, _>>()?;
        let body = match cfg.format {
            Format::Json => to_json(&json!({
                "name": item.name(),
                "matrix": matrix_json(&a),
                "levels": groups.iter().map(|g| json!({
                    "k": g.level(),
                    "group": g.to_string(),
                    "divisors": ints(&g.divisors()),
                    "invariant_factors": ints(&g.invariant_factors()),
                    "order": int(g.order()),
                })).collect::<Vec<_>>(),
            })),
            Format::Csv => to_csv(
                &strings(&["k", "group", "invariant_factors", "order"]),
                &groups
                    .iter()
                    .map(|g| {
                        vec![
                            g.level().to_string(),
                            g.to_string(),
                            strings(&g.invariant_factors()).join(" "),
                            g.order().to_string(),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
        };
        Ok(Report::text(body))
    }
}

pub struct Fix;

impl Command for Fix {
    fn name(&self) -> &'static str {
        "fix"
    }

    fn about(&self) -> &'static str {
        "Fix(phi^k) with translations, displacement classes and alpha images (CSV)"
    }

    fn run(&self, item: &Item, cfg: &RunConfig) -> Result<Report, CliError> {
        let k = check_k(cfg)?;
        let m = tight_map(item, self.name())?;
        let b = m.rank();
        let pts = periodic_points_bounded(&m, k, cfg.budget.unwrap_or(DEFAULT_ITINERARY_BUDGET))
            .map_err(homdyn::Error::from)?;
        let mut header = strings(&["point", "edge", "t", "period", "least_period", "itinerary"]);
        header.extend(gen_header("delta", b));
        header.push("class_snf".into());
        header.extend(gen_header("alpha", b));
        let rows: Vec<Vec<String>> = pts
            .iter()
            .map(|p| {
                let (edge, t) = if p.point.is_vertex() {
                    (String::new(), "0".to_string())
                } else {
                    (gen_char(p.point.edge()).to_string(), p.point.t().to_string())
                };
                let mut row = vec![
                    p.point.to_string(),
                    edge,
                    t,
                    p.period.to_string(),
                    p.least_period.to_string(),
                    homdyn::graphmap::fmt_itinerary(&p.itinerary),
                ];
                row.extend(strings(&p.translation));
                row.push(p.displacement.as_ref().map(element_class).unwrap_or_default());
                match &p.alpha_image {
                    Some(y) => row.extend(strings(y.coords())),
                    None => row.extend(std::iter::repeat_n(String::new(), b)),
                }
                row
            })
            .collect();
        Ok(Report::text(to_csv(&header, &rows)))
    }
}

pub struct Torus;

impl Command for Torus {
    fn name(&self) -> &'static str {
        "torus"
    }

    fn about(&self) -> &'static str {
        "Fix(Phi_A^k) on the torus, one row per Bowen-Franks class (CSV)"
    }

    fn run(&self, item: &Item, cfg: &RunConfig) -> Result<Report, CliError> {
        let k = check_k(cfg)?;
        let a = matrix_of(item);
        let g = bf_group(&a, k).map_err(|e| CliError::Core(e.into()))?;
        let limit = cfg.budget.unwrap_or(DEFAULT_ITINERARY_BUDGET);
        if *g.order() > BigInt::from(limit) {
            return Err(CliError::Core(homdyn::Error::GraphMap(
                homdyn::graphmap::GraphMapError::BudgetExceeded { limit },
            )));
        }
        let mut header = vec!["class_snf".to_string()];
        header.extend(gen_header("x", a.dim()));
        let mut rows: Vec<(homdyn::bfgroup::TorusPoint, String)> =
            g.elements().map(|e| (e.psi(), element_class(&e))).collect();
        rows.sort();
        let rows: Vec<Vec<String>> = rows
            .into_iter()
            .map(|(y, class)| std::iter::once(class).chain(strings(y.coords())).collect())
            .collect();
        Ok(Report::text(to_csv(&header, &rows)))
    }
}

pub struct RotSet;

impl Command for RotSet {
    fn name(&self) -> &'static str {
        "rotset"
    }

    fn about(&self) -> &'static str {
        "minimal loops, rotation vectors and their convex hull (CSV + SVG)"
    }

    fn run(&self, item: &Item, cfg: &RunConfig) -> Result<Report, CliError> {
        let m = tight_map(item, self.name())?;
        let b = m.rank();
        let r = rotation_set_bounded(&m, cfg.budget.unwrap_or(DEFAULT_LOOP_BUDGET)).map_err(homdyn::Error::from)?;
        let mut header = strings(&["loop", "length", "transitions"]);
        header.extend(gen_header("rho", b));
        header.push("hull_vertex".into());
        let rows: Vec<Vec<String>> = r
            .loops
            .iter()
            .zip(&r.loop_vectors)
            .enumerate()
            .map(|(i, (l, (len, v)))| {
                let mut row = vec![i.to_string(), len.to_string(), l.to_string()];
                row.extend(strings(v));
                row.push(r.hull_vertices.contains(v).to_string());
                row
            })
            .collect();
        let mut fig = Figure::new();
        let hull: Vec<(f64, f64)> = r.hull_vertices.iter().map(|v| pt(v)).collect();
        if hull.len() >= 3 {
            fig.polygon(hull, "hull");
        }
        for (_, v) in &r.loop_vectors {
            fig.circle(pt(v), 1.5, "loop");
        }
        for v in &r.fixed_point_vectors {
            fig.circle(pt(v), 6.0, "fixed");
        }
        for v in &r.period2_vectors {
            fig.cross(pt(v), 5.0, "period2");
        }
        Ok(Report {
            body: to_csv(&header, &rows),
            svg: Some(fig.render()),
            unknown: false,
        })
    }
}

pub struct Beta;

/// All integer vectors with entries in `[-w, w]`, lexicographically.
fn window(b: usize, w: u32) -> Vec<Vec<BigInt>> {
    let w = w as i64;
    let mut out = vec![vec![]];
    for _ in 0..b {
        out = out
            .into_iter()
            .flat_map(|v: Vec<BigInt>| {
                (-w..=w).map(move |x| {
                    let mut v = v.clone();
                    v.push(BigInt::from(x));
                    v
                })
            })
            .collect();
    }
    out
}

impl Command for Beta {
    fn name(&self) -> &'static str {
        "beta"
    }

    fn about(&self) -> &'static str {
        "exact semiconjugacy values at level-k breakpoints with fixed-point overlay (CSV + SVG)"
    }

    fn run(&self, item: &Item, cfg: &RunConfig) -> Result<Report, CliError> {
        let k = check_k(cfg)?;
        let m = tight_map(item, self.name())?;
        let b = m.rank();
        let approx = beta_breakpoints(&m, k).map_err(homdyn::Error::from)?;
        let fixed = periodic_points_bounded(&m, 1, cfg.budget.unwrap_or(DEFAULT_ITINERARY_BUDGET))
            .map_err(homdyn::Error::from)?;
        let inv = rat_inverse(&m.matrix().pow_minus_identity(1)).map_err(homdyn::Error::from)?;
        let mut header = strings(&["kind", "edge"]);
        header.extend(gen_header("base", b));
        header.extend(strings(&["i", "t"]));
        header.extend(gen_header("beta", b));
        let mut rows = Vec::new();
        let mut fig = Figure::new();
        let translates = window(b, cfg.window);
        for n in &translates {
            let origin = n.iter().all(|x| x == &BigInt::from(0));
            for e in 0..b {
                let mut line = Vec::new();
                for i in 0..=approx.breakpoints_per_edge() {
                    let v = approx.value_at(e, i, n);
                    let mut row = vec!["beta".to_string(), gen_char(e).to_string()];
                    row.extend(strings(n));
                    row.extend([i.to_string(), approx.t(i).to_string()]);
                    row.extend(strings(&v));
                    rows.push(row);
                    line.push(pt(&v));
                }
                let class = if origin { format!("edge-{}", e % 4) } else { format!("edge-{} translate", e % 4) };
                fig.polyline(line, &class);
            }
        }
        for n in &translates {
            for p in &fixed {
                let x = if p.point.is_vertex() {
                    CoverPoint::lattice(n.clone())
                } else {
                    CoverPoint::on_edge(p.point.edge(), p.point.t().clone(), n.clone())
                };
                let v: Vec<BigRational> = inv
                    .mul_int_vec(&p.translation)
                    .into_iter()
                    .zip(n)
                    .map(|(y, z)| y + BigRational::from_integer(z.clone()))
                    .collect();
                let mut row = vec!["periodic".to_string(), x.point().to_string()];
                row.extend(strings(x.base()));
                row.extend([String::new(), if p.point.is_vertex() { "0".into() } else { p.point.t().to_string() }]);
                row.extend(strings(&v));
                rows.push(row);
                fig.circle(pt(&v), 3.0, "periodic");
            }
        }
        Ok(Report {
            body: to_csv(&header, &rows),
            svg: Some(fig.render()),
            unknown: false,
        })
    }
}

pub struct Shadow;

impl Command for Shadow {
    fn name(&self) -> &'static str {
        "shadow"
    }

    fn about(&self) -> &'static str {
        "injectivity certificate for the semiconjugacy (JSON; exit 2 when UNKNOWN)"
    }

    fn run(&self, item: &Item, cfg: &RunConfig) -> Result<Report, CliError> {
        let m = tight_map(item, self.name())?;
        let norm = NormRegistry::default()
            .build(&cfg.norm, m.matrix())
            .map_err(homdyn::Error::from)?;
        let cert = shadow_pairs_with(&m, cfg.depth, norm.as_ref(), cfg.budget.unwrap_or(DEFAULT_NODE_BUDGET))
            .map_err(homdyn::Error::from)?;
        let witness = match &cert.status {
            InjectivityStatus::NotInjective { x, y, image } => json!({
                "x": rats(&x.iota()),
                "y": rats(&y.iota()),
                "image": rats(&image.iota()),
            }),
            _ => Value::Null,
        };
        let body = to_json(&json!({
            "name": item.name(),
            "status": cert.status.to_string(),
            "depth": cert.depth,
            "max_depth": cfg.depth,
            "delta": rat(&cert.delta),
            "norm": cert.norm,
            "nodes": cert.nodes,
            "witness": witness,
        }));
        Ok(Report {
            body,
            svg: None,
            unknown: cert.status == InjectivityStatus::Unknown,
        })
    }
}
