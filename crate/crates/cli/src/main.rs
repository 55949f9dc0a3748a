//! `ample`: reproducible command line access to the ample-core library.
//!
//! Every command prints one JSON document on stdout. Exit status is 0 when the checked
//! property holds, 1 when it is violated (the JSON then carries a certificate that
//! `ample recheck` re-validates) and 2 for usage, input and budget errors.

mod oracle;

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use ample_core::ampleness::{
    challenge_from_json, challenge_json, dedekind_reduced, find_witness, min_vertex_bound, recheck_counterexample,
    resilience_guarantee, verify_ample, AmpleChallenge, Budget, Verdict, VerifyMode, WitnessSearch,
};
use ample_core::charsum::{coset_count, random_squarefree_roots, weil_sum, CharCtx, CosetInstance};
use ample_core::field::FieldCtx;
use ample_core::paley::{
    certified_params, challenge_check, solve_witness, WitnessProblem, XSearch, EXHAUSTIVE_X_LIMIT,
};
use ample_core::random::{bound_not_ample, existence_threshold, p_from_mu, sample_explicit, FaceProb, ProbProfile};
use ample_core::seed::{derive_seed, stream};
use ample_core::simplex::{ExplicitComplex, RemovalFamily, Simplex, Vertex, SCAN_LIMIT};
use ample_core::topo::{
    betti_gf2, fill_loop, random_loop, sphere_audit, ConeMode, ConeSearch, SimplicialLoop, SphereTriangulation,
};
use ample_core::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use oracle::{parse_field, OracleSpec};

#[derive(Parser)]
#[command(name = "ample", version, about = "Build, verify and audit r-ample simplicial complexes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Master seed; every random stream is derived from it by a labeled hash.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock milliseconds in reports (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum FillMode {
    Containment,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum SphereKind {
    Tetrahedron,
    Octahedron,
    Icosahedron,
    Bipyramid,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Decide r-ampleness: for all |U| <= r and all A ⊆ X_U some v ∉ U has lk(v) ∩ X_U = A.
    Verify {
        #[arg(long)]
        oracle: OracleSpec,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        /// Challenges drawn in sampled mode.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
    },
    /// Find a vertex realizing the link pattern A over U.
    Witness {
        #[arg(long)]
        oracle: OracleSpec,
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<Vertex>,
        /// Facets of A as JSON, e.g. '[[0,1]]'; isolated vertices as singletons.
        #[arg(long, default_value = "[]")]
        a: String,
        /// Sample this many candidates instead of scanning all vertices.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Sample the skeleton-by-skeleton random complex and optionally verify it.
    Random {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        p_vertex: f64,
        #[arg(long, default_value_t = 3)]
        dim_cap: usize,
        /// Exhaustively verify this ampleness level.
        #[arg(long)]
        verify: Option<usize>,
        /// Remove this family (JSON list of simplexes) before verifying.
        #[arg(long)]
        remove: Option<String>,
        /// Include the complex itself in the output.
        #[arg(long)]
        emit: bool,
    },
    /// Fill simplicial loops by discs, coning off arcs of r vertices.
    Fill {
        #[arg(long)]
        oracle: OracleSpec,
        #[arg(long, default_value_t = 5)]
        r: usize,
        /// Fill this loop instead of random ones.
        #[arg(long = "loop", value_delimiter = ',')]
        lp: Option<Vec<Vertex>>,
        #[arg(long, default_value_t = 1)]
        loops: u64,
        #[arg(long, default_value_t = 10)]
        min_len: usize,
        #[arg(long, default_value_t = 30)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "containment")]
        mode: FillMode,
        /// Cone candidates sampled per step (default: full scan on small complexes).
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Betti numbers over GF(2) of an explicit complex.
    Betti {
        #[arg(long)]
        oracle: OracleSpec,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Ampleness guaranteed after removing a family of simplexes.
    Resilience {
        #[arg(long)]
        r: usize,
        /// JSON list of simplexes, e.g. '[[7]]'.
        #[arg(long)]
        family: String,
    },
    /// M'(k): the number of simplicial complexes on k labeled vertices.
    Dedekind {
        #[arg(long)]
        k: usize,
    },
    /// Vertex lower bounds, random-complex thresholds and certified Iterated Paley parameters.
    Params {
        #[arg(long)]
        r: usize,
        /// Vertex count for the non-ampleness bound and for p from μ.
        #[arg(long)]
        n: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Solve ampleness challenges on the Iterated Paley complex.
    Solve {
        /// `field:n=..,p=..[,g=..]`; defaults to the certified field for `--r`.
        #[arg(long)]
        ctx: Option<String>,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, value_delimiter = ',')]
        u: Option<Vec<u64>>,
        /// Hypergraph Y on U as JSON, e.g. '[[3],[3,8]]'.
        #[arg(long, default_value = "[]")]
        y: String,
        /// Number of random challenges when no U is given.
        #[arg(long, default_value_t = 1)]
        challenges: u64,
    },
    /// Audit coset intersection counts and Weil sums over F_q.
    AuditCharsum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Curvature identity, face count and low-degree adjacent pairs of sphere triangulations.
    SphereAudit {
        #[arg(long, value_enum, default_value = "random")]
        kind: SphereKind,
        /// Rim size of the bipyramid.
        #[arg(long, default_value_t = 12)]
        k: u64,
        /// Vertex splits for random spheres.
        #[arg(long, default_value_t = 50)]
        splits: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Compare the solver's sufficient conditions with actual witnesses on small fields.
    Explore {
        #[arg(long)]
        ctx: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Re-validate the certificates in a report produced with exit status 1.
    Recheck {
        /// Report file, or `-` for stdin.
        #[arg(long, default_value = "-")]
        report: String,
    },
}

/// A finished command: its JSON and whether the checked property held.
struct Outcome {
    json: Value,
    holds: bool,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome { json, holds: true }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Format(format!("{what}: {e}")))
}

fn big(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::Budget { name, limit } => json!({"error": "budget", "name": name, "limit": limit.to_string()}),
        Error::NoWitness { u, a_facets } => {
            json!({"error": "no-witness", "counterexample": {"U": u, "A_facets": a_facets}})
        }
        Error::Unsatisfiable { level } => json!({"error": "unsatisfiable", "level": level}),
        other => json!({"error": other.to_string()}),
    }
}

fn elapsed(g: &Global, t: Instant) -> Value {
    if g.timing {
        json!(t.elapsed().as_millis() as u64)
    } else {
        Value::Null
    }
}

fn simplexes(lists: Vec<Vec<Vertex>>) -> Result<Vec<Simplex>> {
    lists.into_iter().map(Simplex::new).collect()
}

fn verify(g: &Global, spec: &OracleSpec, r: usize, mode: Mode, trials: u64) -> Result<Outcome> {
    let oracle = spec.load(r + 1)?;
    let mode = match mode {
        Mode::Exhaustive => VerifyMode::Exhaustive,
        Mode::Sampled => VerifyMode::Sampled { seed: derive_seed(g.seed, "verify", 0), trials },
    };
    let report = verify_ample(oracle.view(), r, mode, Budget::default())?;
    let mut json = report.to_json(g.timing);
    json["oracle"] = json!(spec.to_string());
    Ok(Outcome { json, holds: !matches!(report.verdict, Verdict::Counterexample(_)) })
}

fn witness(g: &Global, spec: &OracleSpec, u: Vec<Vertex>, a: &str, trials: Option<u64>) -> Result<Outcome> {
    let oracle = spec.load(u.len() + 1)?;
    let facets = simplexes(parse_json("A", a)?)?;
    let verts: Vec<Vertex> = facets.iter().flat_map(|f| f.vertices().to_vec()).collect();
    let a = ExplicitComplex::from_facets(verts, &facets, u.len().max(1))?;
    let challenge = AmpleChallenge::new(u, a);
    let search = match trials {
        Some(trials) => WitnessSearch::Sampled { seed: derive_seed(g.seed, "witness", 0), trials },
        None => WitnessSearch::Exhaustive,
    };
    let v = find_witness(oracle.view(), &challenge, search)?;
    let mut json = json!({"oracle": spec.to_string(), "challenge": challenge_json(&challenge), "witness": v});
    if v.is_none() && trials.is_none() {
        json["counterexample"] = challenge_json(&challenge);
    }
    Ok(Outcome { json, holds: v.is_some() })
}

#[allow(clippy::too_many_arguments)]
fn random(
    g: &Global,
    n: u64,
    p: f64,
    p_vertex: f64,
    dim_cap: usize,
    level: Option<usize>,
    remove: Option<String>,
    emit: bool,
) -> Result<Outcome> {
    let t = Instant::now();
    let profile = ProbProfile { p_vertex, face: FaceProb::Constant(p), medial: None, mu: None }.validated()?;
    let seed = derive_seed(g.seed, "complex", 0);
    let mut x = sample_explicit(n, &profile, dim_cap, seed);
    let mut json = json!({"n": n, "p": p, "p_vertex": p_vertex, "dim_cap": dim_cap, "seed": seed});
    json["f_vector"] = json!(x.f_vector());
    let mut holds = true;
    if let Some(family) = remove {
        let family = RemovalFamily::new(simplexes(parse_json("family", &family)?)?);
        x = x.remove_family(&family, true)?;
        json["removed"] = json!({
            "family": family.members().map(|s| s.vertices().to_vec()).collect::<Vec<_>>(),
            "f_vector": x.f_vector(),
            "guarantee": level.map(|r| resilience_guarantee(r, &family).to_json()),
        });
    }
    if let Some(r) = level {
        let report = verify_ample(&x, r, VerifyMode::Exhaustive, Budget::default())?;
        holds = report.is_ample();
        json["verify"] = report.to_json(g.timing);
    }
    if emit {
        json["complex"] = serde_json::to_value(x.to_file()).map_err(|e| Error::Format(e.to_string()))?;
    }
    json["ms"] = elapsed(g, t);
    Ok(Outcome { json, holds })
}

#[allow(clippy::too_many_arguments)]
fn fill(
    g: &Global,
    spec: &OracleSpec,
    r: usize,
    lp: Option<Vec<Vertex>>,
    loops: u64,
    min_len: usize,
    max_len: usize,
    mode: FillMode,
    trials: Option<u64>,
) -> Result<Outcome> {
    let t = Instant::now();
    if min_len < 3 || max_len < min_len {
        return Err(Error::Input("need 3 <= min-len <= max-len".into()));
    }
    let oracle = spec.load(r)?;
    let x = oracle.view();
    let mode = match mode {
        FillMode::Containment => ConeMode::Containment,
        FillMode::Exact => ConeMode::ExactLink,
    };
    let search_for = |i: u64| match trials {
        Some(trials) => ConeSearch::Sampled { seed: derive_seed(g.seed, "cone", i), trials },
        None if x.vertex_count() <= 1 << 16 => ConeSearch::Exhaustive,
        None => ConeSearch::Sampled { seed: derive_seed(g.seed, "cone", i), trials: SCAN_LIMIT },
    };
    let count = if lp.is_some() { 1 } else { loops };
    let rows: Vec<Result<Value>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let lp = match &lp {
                Some(v) => SimplicialLoop::new(x, v.clone())?,
                None => {
                    let mut rng = stream(g.seed, "loop", i);
                    let len = rng.gen_range(min_len..=max_len);
                    random_loop(x, len, &mut rng, SCAN_LIMIT)?
                }
            };
            Ok(match fill_loop(x, &lp, r, mode, search_for(i)) {
                Ok(cert) => json!({
                    "length": lp.len(),
                    "internal": cert.internal_count(),
                    "triangles": cert.triangles.len(),
                    "within_bounds": cert.within_bounds(r),
                    "certificate": cert.to_json(),
                }),
                Err(e @ Error::NoWitness { .. }) => {
                    let mut row = error_json(&e);
                    row["length"] = json!(lp.len());
                    row["loop"] = json!(lp.vertices());
                    row
                }
                Err(e) => return Err(e),
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let holds = rows.iter().all(|r| r["within_bounds"] == json!(true));
    let mode_name = if mode == ConeMode::Containment { "containment" } else { "exact" };
    let json = json!({"oracle": spec.to_string(), "r": r, "mode": mode_name, "results": rows, "ms": elapsed(g, t)});
    Ok(Outcome { json, holds })
}

fn betti(spec: &OracleSpec, max_dim: Option<usize>) -> Result<Outcome> {
    let oracle = spec.load(2)?;
    let x = oracle.explicit().ok_or_else(|| Error::Input("betti needs an explicit complex".into()))?;
    let top = max_dim.unwrap_or_else(|| x.dimension().unwrap_or(0));
    Ok(Outcome::ok(json!({
        "oracle": spec.to_string(),
        "f_vector": x.f_vector(),
        "euler": x.euler_characteristic(),
        "betti": betti_gf2(x, top)?,
    })))
}

fn params(r: usize, n: Option<f64>, p: Option<f64>, mu: Option<f64>) -> Result<Outcome> {
    if r == 0 {
        return Err(Error::Input("r must be at least 1".into()));
    }
    let vb = min_vertex_bound(r);
    let mut json = json!({
        "r": r,
        "min_vertices": {
            "exact": vb.exact.as_ref().map(big).unwrap_or(Value::Null),
            "binomial": big(&vb.binomial),
        },
        "existence_threshold": big(&existence_threshold(r as u32)),
    });
    json["certified_paley"] = match certified_params(r) {
        Ok(c) => c.to_json(),
        Err(e) => json!({"unsupported": e.to_string()}),
    };
    if let (Some(n), Some(p)) = (n, p) {
        let (log, value) = bound_not_ample(n, r as u32, p)?;
        json["not_ample_bound"] = json!({"n": n, "p": p, "log": log, "value": value});
    }
    if let (Some(n), Some(mu)) = (n, mu) {
        json["p_from_mu"] = json!({"n": n, "mu": mu, "p": p_from_mu(n, r as u32, mu)?});
    }
    Ok(Outcome::ok(json))
}

fn random_challenge(ctx: &FieldCtx, r: usize, master: u64, i: u64) -> (Vec<u64>, Vec<Vec<u64>>) {
    let mut rng = stream(master, "challenge", i);
    let mut u: Vec<u64> = Vec::with_capacity(r);
    while u.len() < r {
        let v = rng.gen_range(0..ctx.n());
        if !u.contains(&v) {
            u.push(v);
        }
    }
    u.sort_unstable();
    let y = (1u64..1 << r)
        .filter(|_| rng.gen_bool(0.5))
        .map(|m| (0..r).filter(|b| m >> b & 1 == 1).map(|b| u[b]).collect())
        .collect();
    (u, y)
}

fn solve_one(ctx: &FieldCtx, u: Vec<u64>, y: Vec<Vec<u64>>, seed: u64) -> Result<Value> {
    let problem = WitnessProblem::new(u.clone(), &y)?;
    match solve_witness(ctx, &problem, XSearch::auto(ctx, u.len(), seed)) {
        Ok(sol) => {
            let mut row = sol.to_json(&problem);
            row["check"] = json!(challenge_check(ctx, &u, &y, sol.x)?);
            Ok(row)
        }
        Err(e @ (Error::Unsatisfiable { .. } | Error::Budget { .. })) => {
            let mut row = error_json(&e);
            row["U"] = json!(u);
            row["Y"] = json!(y);
            Ok(row)
        }
        Err(e) => Err(e),
    }
}

fn solve(g: &Global, ctx: Option<String>, r: usize, u: Option<Vec<u64>>, y: &str, challenges: u64) -> Result<Outcome> {
    let t = Instant::now();
    let ctx = match ctx {
        Some(s) => parse_field(&s)?,
        None => certified_params(r)?.ctx()?,
    };
    let rows: Vec<Value> = match u {
        Some(u) => vec![solve_one(&ctx, u, parse_json("Y", y)?, derive_seed(g.seed, "solve", 0))?],
        None => (0..challenges)
            .into_par_iter()
            .map(|i| {
                let (u, y) = random_challenge(&ctx, r, g.seed, i);
                solve_one(&ctx, u, y, derive_seed(g.seed, "solve", i))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let holds = rows.iter().all(|r| r["check"] == json!(true));
    Ok(Outcome { json: json!({"ctx": ctx.spec_string(), "results": rows, "ms": elapsed(g, t)}), holds })
}

fn audit_row(ctx: &CharCtx, inst: &CosetInstance, roots: &[(u64, u64)]) -> Result<Value> {
    let audit = coset_count(ctx, inst)?;
    let weil = weil_sum(ctx, roots)?;
    let mut row = audit.to_json(inst);
    row["passed"] = json!(audit.passed());
    row["weil"] = json!({
        "roots": roots.iter().map(|r| r.0).collect::<Vec<_>>(),
        "multiplicities": roots.iter().map(|r| r.1).collect::<Vec<_>>(),
        "magnitude": weil.magnitude,
        "bound": weil.bound,
        "holds": weil.holds(),
    });
    Ok(row)
}

fn audit_charsum(g: &Global, q: u64, m: u64, d: usize, trials: u64) -> Result<Outcome> {
    let ctx = CharCtx::new(q, m)?;
    let rows = (0..trials)
        .into_par_iter()
        .map(|i| {
            let inst = CosetInstance::random(&ctx, d, &mut stream(g.seed, "coset", i))?;
            let roots = random_squarefree_roots(&ctx, d, &mut stream(g.seed, "weil", i));
            audit_row(&ctx, &inst, &roots)
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter(|r| r["passed"] != json!(true) || r["weil"]["holds"] != json!(true)).count();
    Ok(Outcome {
        json: json!({"q": q, "m": m, "d": d, "instances": rows, "violations": violations}),
        holds: violations == 0,
    })
}

fn sphere(g: &Global, kind: SphereKind, k: u64, splits: usize, count: u64) -> Result<Outcome> {
    let rows: Vec<Value> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = match kind {
                SphereKind::Tetrahedron => SphereTriangulation::tetrahedron(),
                SphereKind::Octahedron => SphereTriangulation::octahedron(),
                SphereKind::Icosahedron => SphereTriangulation::icosahedron(),
                SphereKind::Bipyramid => SphereTriangulation::bipyramid(k),
                SphereKind::Random => SphereTriangulation::random(splits, &mut stream(g.seed, "sphere", i)),
            };
            let report = sphere_audit(&s);
            let mut row = report.to_json();
            row["passed"] = json!(report.passed());
            if !report.passed() {
                row["triangles"] = json!(s.triangles());
            }
            row
        })
        .collect();
    let holds = rows.iter().all(|r| r["passed"] == json!(true));
    Ok(Outcome { json: json!({"reports": rows}), holds })
}

fn explore(g: &Global, ctx: &str, r: usize, trials: u64) -> Result<Outcome> {
    let ctx = parse_field(ctx)?;
    if ctx.n() > EXHAUSTIVE_X_LIMIT {
        return Err(Error::Budget { name: "explore_n", limit: EXHAUSTIVE_X_LIMIT as u128 });
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (u, y) = random_challenge(&ctx, r, g.seed, i);
            let problem = WitnessProblem::new(u.clone(), &y)?;
            let solved = match solve_witness(&ctx, &problem, XSearch::Exhaustive) {
                Ok(sol) => Some(sol.x),
                Err(Error::Unsatisfiable { .. } | Error::Budget { .. }) => None,
                Err(e) => return Err(e),
            };
            let mut actual = None;
            for x in 0..ctx.n() {
                if !u.contains(&x) && challenge_check(&ctx, &u, &y, x)? {
                    actual = Some(x);
                    break;
                }
            }
            Ok(json!({"U": u, "Y": y, "solver": solved, "actual": actual}))
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |f: &dyn Fn(&Value) -> bool| rows.iter().filter(|r| f(r)).count();
    let summary = json!({
        "solved": count(&|r| !r["solver"].is_null()),
        "unsolved_with_witness": count(&|r| r["solver"].is_null() && !r["actual"].is_null()),
        "unsolved_without_witness": count(&|r| r["solver"].is_null() && r["actual"].is_null()),
    });
    Ok(Outcome::ok(json!({"ctx": ctx.spec_string(), "r": r, "summary": summary, "challenges": rows})))
}

/// Re-derives every certificate found in a report. `holds` means all were confirmed.
fn recheck(report: &str) -> Result<Outcome> {
    let text = if report == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(report).map_err(|e| Error::Input(format!("{report}: {e}")))?
    };
    let v: Value = parse_json("report", &text)?;
    let mut checked: Vec<Value> = Vec::new();

    if let (Some(c), Some(spec)) = (v.get("counterexample"), v["oracle"].as_str()) {
        let spec: OracleSpec = spec.parse()?;
        let challenge = challenge_from_json(c)?;
        let oracle = spec.load(challenge.u.len() + 1)?;
        let confirmed = recheck_counterexample(oracle.view(), &challenge)?;
        checked.push(json!({"kind": "counterexample", "confirmed": confirmed}));
    }
    if let (Some(rows), Some(spec)) = (v["results"].as_array(), v["oracle"].as_str()) {
        let spec: OracleSpec = spec.parse()?;
        let r = v["r"].as_u64().unwrap_or(5) as usize;
        let oracle = spec.load(r)?;
        for row in rows.iter().filter(|row| row.get("counterexample").is_some()) {
            let lp: Vec<Vertex> =
                serde_json::from_value(row["loop"].clone()).map_err(|e| Error::Format(e.to_string()))?;
            let arc: Vec<Vertex> =
                serde_json::from_value(row["counterexample"]["U"].clone()).map_err(|e| Error::Format(e.to_string()))?;
            let cyclic = arc.len() == lp.len();
            let x = oracle.view();
            if x.vertex_count() > SCAN_LIMIT {
                return Err(Error::Budget { name: "recheck_scan_vertices", limit: SCAN_LIMIT as u128 });
            }
            let cones = |v: Vertex| {
                let k = arc.len();
                let pairs = if cyclic { k } else { k - 1 };
                (0..pairs).all(|i| {
                    let mut t = [arc[i], arc[(i + 1) % k], v];
                    t.sort_unstable();
                    x.contains(&t)
                })
            };
            let confirmed = x.vertices().filter(|v| !lp.contains(v)).all(|v| !cones(v));
            checked.push(json!({"kind": "stuck-arc", "confirmed": confirmed}));
        }
    }
    if let (Some(rows), Some(ctx)) = (v["results"].as_array(), v["ctx"].as_str()) {
        let ctx = parse_field(ctx)?;
        for row in rows.iter().filter(|row| row["check"] == json!(false)) {
            let u: Vec<u64> = serde_json::from_value(row["U"].clone()).map_err(|e| Error::Format(e.to_string()))?;
            let y: Vec<Vec<u64>> =
                serde_json::from_value(row["Y"].clone()).map_err(|e| Error::Format(e.to_string()))?;
            let x = row["x"].as_u64().ok_or_else(|| Error::Format("missing x".into()))?;
            checked.push(json!({"kind": "failed-solution", "confirmed": !challenge_check(&ctx, &u, &y, x)?}));
        }
    }
    if let Some(rows) = v["instances"].as_array() {
        let ctx = CharCtx::new(
            v["q"].as_u64().ok_or_else(|| Error::Format("missing q".into()))?,
            v["m"].as_u64().ok_or_else(|| Error::Format("missing m".into()))?,
        )?;
        for row in rows.iter().filter(|r| r["passed"] != json!(true) || r["weil"]["holds"] != json!(true)) {
            let field = |k: &str| -> Result<Vec<u64>> {
                serde_json::from_value(row[k].clone()).map_err(|e| Error::Format(e.to_string()))
            };
            let inst = CosetInstance::new(field("c")?.into_iter().zip(field("t")?).collect())?;
            let roots: Vec<u64> =
                serde_json::from_value(row["weil"]["roots"].clone()).map_err(|e| Error::Format(e.to_string()))?;
            let mults: Vec<u64> = serde_json::from_value(row["weil"]["multiplicities"].clone())
                .map_err(|e| Error::Format(e.to_string()))?;
            let roots: Vec<(u64, u64)> = roots.into_iter().zip(mults).collect();
            let redo = audit_row(&ctx, &inst, &roots)?;
            let confirmed = redo["passed"] != json!(true) || redo["weil"]["holds"] != json!(true);
            checked.push(json!({"kind": "charsum-violation", "confirmed": confirmed}));
        }
    }
    if let Some(rows) = v["reports"].as_array() {
        for row in rows.iter().filter(|r| r["passed"] == json!(false)) {
            let tris: Vec<[u64; 3]> =
                serde_json::from_value(row["triangles"].clone()).map_err(|e| Error::Format(e.to_string()))?;
            let confirmed = match SphereTriangulation::new(tris) {
                Ok(s) => !sphere_audit(&s).passed(),
                Err(_) => true,
            };
            checked.push(json!({"kind": "sphere-failure", "confirmed": confirmed}));
        }
    }
    if checked.is_empty() {
        return Err(Error::Input("the report carries no certificate".into()));
    }
    let holds = checked.iter().all(|c| c["confirmed"] == json!(true));
    Ok(Outcome { json: json!({"certificates": checked}), holds })
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = cli.global;
    match cli.command {
        Command::Verify { oracle, r, mode, trials } => verify(&g, &oracle, r, mode, trials),
        Command::Witness { oracle, u, a, trials } => witness(&g, &oracle, u, &a, trials),
        Command::Random { n, p, p_vertex, dim_cap, verify, remove, emit } => {
            random(&g, n, p, p_vertex, dim_cap, verify, remove, emit)
        }
        Command::Fill { oracle, r, lp, loops, min_len, max_len, mode, trials } => {
            fill(&g, &oracle, r, lp, loops, min_len, max_len, mode, trials)
        }
        Command::Betti { oracle, max_dim } => betti(&oracle, max_dim),
        Command::Resilience { r, family } => {
            let family = RemovalFamily::new(simplexes(parse_json("family", &family)?)?);
            Ok(Outcome::ok(resilience_guarantee(r, &family).to_json()))
        }
        Command::Dedekind { k } => {
            if k == 0 {
                return Err(Error::Input("k must be at least 1".into()));
            }
            Ok(Outcome::ok(json!({"k": k, "M_prime": big(&dedekind_reduced(k)?)})))
        }
        Command::Params { r, n, p, mu } => params(r, n, p, mu),
        Command::Solve { ctx, r, u, y, challenges } => solve(&g, ctx, r, u, &y, challenges),
        Command::AuditCharsum { q, m, d, trials } => audit_charsum(&g, q, m, d, trials),
        Command::SphereAudit { kind, k, splits, count } => sphere(&g, kind, k, splits, count),
        Command::Explore { ctx, r, trials } => explore(&g, &ctx, r, trials),
        Command::Recheck { report } => recheck(&report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("ample: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(out) => {
            println!("{}", out.json);
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("ample: {e}");
            println!("{}", error_json(&e));
            let code = matches!(e, Error::NoWitness { .. } | Error::Unsatisfiable { .. });
            ExitCode::from(if code { 1 } else { 2 })
        }
    }
}
