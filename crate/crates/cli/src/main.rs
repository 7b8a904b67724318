mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use eckardt_core::covers;
use eckardt_core::fibrations;
use eckardt_core::fixtures;
use eckardt_core::frac::{format_frac, parse_frac, Frac};
use eckardt_core::geometry::{self, CubicPair, EckardtCubic, Line};
use eckardt_core::jacobian::{self, InvolutionAction};
use eckardt_core::lines;
use eckardt_core::poly::Poly;
use eckardt_core::reconstruct;

use report::Report;

/// Exact and numeric computations around cubic surface pairs and their
/// Eckardt cubic threefolds.
#[derive(Parser)]
#[command(name = "eckardt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a threefold from a surface and a plane, checking smoothness.
    Build {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        l: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find the 27 lines on a smooth cubic surface numerically.
    Lines {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graded dimensions and eigenspace splits of the Jacobian ring.
    Jacobian {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        degree: u32,
        /// involution spec like `diag:+,+,+,+,-`
        #[arg(long)]
        involution: Option<String>,
        #[arg(long)]
        twist: Option<i8>,
    },
    /// Project a threefold from an invariant line.
    Project {
        #[arg(long)]
        x: PathBuf,
        /// `through-p:[a,b,c,d]` or `pointwise:FILE`
        #[arg(long)]
        line: String,
    },
    /// Disjoint-support genericity of a pointwise line.
    CheckGeneric {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        line: PathBuf,
    },
    /// Genus tower, branch sextic and j-invariant matching of a pointwise
    /// line.
    Tower {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        line: PathBuf,
        /// rational section point `a,b,c,d` enabling the matching step
        #[arg(long)]
        e_point: Option<String>,
    },
    /// Rebuild a threefold from a quartic, bitangent and transverse line.
    Reconstruct {
        #[arg(long)]
        quartic: PathBuf,
        #[arg(long)]
        bitangent: PathBuf,
        #[arg(long)]
        line: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        allow_rescale: bool,
    },
    /// Project, reconstruct and compare up to exact scalars.
    Roundtrip {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        line: String,
    },
    /// Print a canonical fixture.
    Fixture { name: String },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value = "fast")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn default_tol() -> f64 {
    std::env::var("ECKARDT_TOL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1e-10)
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Build { f, l, output } => {
            let mut rep = Report::new("build");
            let fp: Poly = rep.load_json(&f)?;
            let lp: Poly = rep.load_json(&l)?;
            let pair = CubicPair::new(fp, lp).map_err(|e| e.to_string())?;
            match geometry::make_eckardt(&pair) {
                Ok(x) => {
                    rep.check("threefold-smooth", true, "smooth");
                    let doc = cubic_json(&x);
                    if let Some(out) = output {
                        std::fs::write(&out, serde_json::to_string_pretty(&doc).unwrap())
                            .map_err(|e| e.to_string())?;
                        rep.result("written", json!(out.display().to_string()));
                    }
                    rep.result("threefold", doc);
                    Ok(rep.finish())
                }
                Err(e) => {
                    rep.check("threefold-smooth", false, &e.to_string());
                    Ok(rep.finish())
                }
            }
        }
        Command::Lines { surface, tol, seed } => {
            let mut rep = Report::new("lines");
            let f: Poly = rep.load_json(&surface)?;
            rep.result("seed", json!(seed));
            let tol = tol.unwrap_or_else(default_tol);
            rep.result("tol", json!(tol));
            match lines::find_lines_numeric(&f, tol, seed) {
                Ok(found) => {
                    rep.check("line-count-27", found.len() == 27, &found.len().to_string());
                    let mut arr = Vec::new();
                    for l in &found {
                        arr.push(json!({
                            "span": [complex_row(&l.a), complex_row(&l.b)],
                            "pluecker": l.pluecker.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                            "residual": lines::residual_of(&f, l),
                        }));
                    }
                    rep.result("lines", json!(arr));
                    Ok(rep.finish())
                }
                Err(e) => {
                    rep.check("line-count-27", false, &e.to_string());
                    Ok(rep.finish())
                }
            }
        }
        Command::Jacobian {
            f,
            degree,
            involution,
            twist,
        } => {
            let mut rep = Report::new("jacobian");
            let fp: Poly = rep.load_json_or_threefold(&f)?;
            let dim = jacobian::graded_dim(&fp, degree).map_err(|e| e.to_string())?;
            rep.result("degree", json!(degree));
            rep.result("dim", json!(dim));
            if let Some(spec) = involution {
                let act = parse_involution(&spec, twist, fp.nvars())?;
                let (plus, minus) =
                    jacobian::eigen_split(&fp, degree, &act).map_err(|e| e.to_string())?;
                rep.result("eigen_split", json!({ "plus": plus, "minus": minus }));
                rep.check("split-sums-to-dim", plus + minus == dim, "additivity");
            }
            Ok(rep.finish())
        }
        Command::Project { x, line } => {
            let mut rep = Report::new("project");
            let cub = load_threefold(&mut rep, &x)?;
            match parse_line_spec(&mut rep, &line, &cub)? {
                LineSpec::ThroughP(ln) => {
                    let proj = fibrations::eckardt_project_through_p(&cub, &ln)
                        .map_err(|e| e.to_string())?;
                    rep.check(
                        "quartic-smooth",
                        proj.quartic_smooth,
                        "discriminant quartic",
                    );
                    rep.check(
                        "transverse",
                        proj.transverse,
                        "line meets quartic transversely",
                    );
                    rep.result("k", poly_json(&proj.norm.k));
                    rep.result("q", poly_json(&proj.norm.q));
                    rep.result("c", poly_json(&proj.norm.c));
                    rep.result("l", poly_json(&proj.norm.l));
                    rep.result("quartic", poly_json(&proj.quartic));
                    rep.result("discriminant", poly_json(&proj.data.discriminant));
                    Ok(rep.finish())
                }
                LineSpec::Pointwise(ln) => {
                    let proj = fibrations::eckardt_project_pointwise(&cub, &ln)
                        .map_err(|e| e.to_string())?;
                    rep.result("discriminant", poly_json(&proj.data.discriminant));
                    rep.result("slice", binform_json(&proj.slice));
                    rep.result("m_piece", binform_json(&proj.m_piece));
                    rep.result("l3", binform_json(&proj.l3));
                    rep.check(
                        "even-discriminant",
                        true,
                        "only even powers of the involution coordinate",
                    );
                    Ok(rep.finish())
                }
            }
        }
        Command::CheckGeneric { x, line } => {
            let mut rep = Report::new("check-generic");
            let cub = load_threefold(&mut rep, &x)?;
            let ln: Line = rep.load_json(&line)?;
            let diag = fibrations::genericity_diagnostics(&cub, &ln).map_err(|e| e.to_string())?;
            rep.result("resultant", json!(format_frac(&diag.resultant)));
            rep.result("q_squarefree", json!(diag.q_squarefree));
            rep.result("b_squarefree", json!(diag.b_squarefree));
            rep.check(
                "disjoint-support",
                diag.resultant != eckardt_core::frac::fint(0),
                "resultant of the degeneracy divisors",
            );
            Ok(rep.finish())
        }
        Command::Tower { x, line, e_point } => {
            let mut rep = Report::new("tower");
            let cub = load_threefold(&mut rep, &x)?;
            let ln: Line = rep.load_json(&line)?;
            let pt = match e_point {
                Some(s) => Some(parse_point(&s)?),
                None => None,
            };
            let tower = covers::tower(&cub, &ln, pt.as_deref(), 1e-6).map_err(|e| e.to_string())?;
            rep.result(
                "genera",
                json!({
                    "dtilde": tower.genera.g_dtilde,
                    "dsigma": tower.genera.g_dsigma,
                    "dsigmaiota": tower.genera.g_dsigmaiota,
                    "d": tower.genera.g_d,
                    "dbar": tower.genera.g_dbar,
                }),
            );
            rep.result("sextic", binform_json(&tower.sextic));
            rep.check("generic", tower.generic, "disjoint-support condition");
            match &tower.fixed_points {
                Ok(n) => {
                    rep.result("fixed_points", json!(n));
                    rep.check("six-fixed-points", *n == 6, "involution fixed points");
                }
                Err(e) => rep.check("six-fixed-points", false, &e.to_string()),
            }
            if let Some(m) = &tower.mumford {
                match m {
                    Ok(mm) => {
                        rep.result(
                            "mumford",
                            serde_json::to_value(mm).map_err(|e| e.to_string())?,
                        );
                        rep.check(
                            "mumford-match",
                            !mm.matches.is_empty(),
                            "matching split exists",
                        );
                    }
                    Err(e) => rep.check("mumford-match", false, &e.to_string()),
                }
            }
            Ok(rep.finish())
        }
        Command::Reconstruct {
            quartic,
            bitangent,
            line,
            output,
            allow_rescale,
        } => {
            let mut rep = Report::new("reconstruct");
            let g: Poly = rep.load_json(&quartic)?;
            let k: Poly = rep.load_json(&bitangent)?;
            let l: Poly = rep.load_json(&line)?;
            match reconstruct::eckardt_from_triple(&g, &k, &l, allow_rescale) {
                Ok((triple, dec)) => {
                    rep.check("threefold-smooth", true, "smooth");
                    rep.result("rescale", json!(format_frac(&dec.rescale)));
                    let doc = cubic_json(&triple.x);
                    if let Some(out) = output {
                        std::fs::write(&out, serde_json::to_string_pretty(&doc).unwrap())
                            .map_err(|e| e.to_string())?;
                        rep.result("written", json!(out.display().to_string()));
                    }
                    rep.result("threefold", doc);
                    Ok(rep.finish())
                }
                Err(e) => {
                    rep.check("threefold-smooth", false, &e.to_string());
                    Ok(rep.finish())
                }
            }
        }
        Command::Roundtrip { x, line } => {
            let mut rep = Report::new("roundtrip");
            let cub = load_threefold(&mut rep, &x)?;
            let ln = match parse_line_spec(&mut rep, &line, &cub)? {
                LineSpec::ThroughP(l) => l,
                LineSpec::Pointwise(_) => return Err("roundtrip expects a through-p line".into()),
            };
            match reconstruct::roundtrip_check(&cub, &ln) {
                Ok(r) => {
                    rep.result(
                        "scalars",
                        json!({ "g": r.scalar_g, "k": r.scalar_k, "l": r.scalar_l }),
                    );
                    rep.result("rescale", json!(r.rescale));
                    rep.check("roundtrip", r.pass, "re-projection equal up to scalars");
                    Ok(rep.finish())
                }
                Err(e) => {
                    rep.check("roundtrip", false, &e.to_string());
                    Ok(rep.finish())
                }
            }
        }
        Command::Fixture { name } => {
            let mut rep = Report::new("fixture");
            let doc = fixture_json(&name)?;
            rep.result("name", json!(name));
            rep.result("fixture", doc);
            Ok(rep.finish())
        }
        Command::Verify { suite } => {
            if suite != "fast" && suite != "full" {
                return Err(format!("unknown suite {suite:?}"));
            }
            let mut rep = Report::new("verify");
            let results = eckardt_core::acceptance::run_all();
            for r in &results {
                eprintln!("{}", r.line());
                rep.check(
                    &format!("criterion-{:02}", r.id),
                    r.pass,
                    &format!("{}: {}", r.name, r.detail),
                );
            }
            rep.result("passed", json!(results.iter().filter(|r| r.pass).count()));
            rep.result("total", json!(results.len()));
            Ok(rep.finish())
        }
    }
}

fn complex_row(v: &[eckardt_core::numeric::Complex64; 4]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn poly_json(p: &Poly) -> serde_json::Value {
    serde_json::to_value(p).expect("poly serializes")
}

fn binform_json(b: &eckardt_core::BinForm) -> serde_json::Value {
    serde_json::to_value(b).expect("binary form serializes")
}

fn cubic_json(x: &EckardtCubic) -> serde_json::Value {
    json!({
        "f": poly_json(x.surface()),
        "l": poly_json(x.plane()),
        "F": poly_json(x.polynomial()),
        "meta": {
            "eckardt_point": ["0/1", "0/1", "0/1", "0/1", "1/1"],
            "involution": "diag:+,+,+,+,-",
        },
    })
}

fn load_threefold(rep: &mut Report, path: &PathBuf) -> Result<EckardtCubic, String> {
    let value: serde_json::Value = rep.load_json(path)?;
    let doc = value
        .as_object()
        .ok_or_else(|| "threefold file must be an object".to_string())?;
    let f: Poly = serde_json::from_value(
        doc.get("f")
            .cloned()
            .ok_or_else(|| "missing field f".to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let l: Poly = serde_json::from_value(
        doc.get("l")
            .cloned()
            .ok_or_else(|| "missing field l".to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let pair = CubicPair::new(f, l).map_err(|e| e.to_string())?;
    let x = geometry::make_eckardt(&pair).map_err(|e| e.to_string())?;
    if let Some(big) = doc.get("F") {
        let big: Poly = serde_json::from_value(big.clone()).map_err(|e| e.to_string())?;
        if &big != x.polynomial() {
            return Err("stored F disagrees with f + l x4^2".into());
        }
    }
    Ok(x)
}

enum LineSpec {
    ThroughP(Line),
    Pointwise(Line),
}

fn parse_line_spec(rep: &mut Report, spec: &str, x: &EckardtCubic) -> Result<LineSpec, String> {
    if let Some(coords) = spec.strip_prefix("through-p:") {
        let e = parse_point(coords.trim_start_matches('[').trim_end_matches(']'))?;
        if e.len() != 4 {
            return Err("through-p expects 4 coordinates".into());
        }
        let mut e5 = e;
        e5.push(Frac::from_integer(0.into()));
        let line = Line::new(x.eckardt_point(), e5).map_err(|e| e.to_string())?;
        Ok(LineSpec::ThroughP(line))
    } else if let Some(path) = spec.strip_prefix("pointwise:") {
        let line: Line = rep.load_json(&PathBuf::from(path))?;
        Ok(LineSpec::Pointwise(line))
    } else {
        Err(format!("bad line spec {spec:?}"))
    }
}

fn parse_point(s: &str) -> Result<Vec<Frac>, String> {
    s.split(',')
        .map(|tok| parse_frac(tok.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn parse_involution(
    spec: &str,
    twist: Option<i8>,
    nvars: usize,
) -> Result<InvolutionAction, String> {
    let body = spec
        .strip_prefix("diag:")
        .ok_or_else(|| "involution spec must start with diag:".to_string())?;
    let signs: Result<Vec<i8>, String> = body
        .split(',')
        .map(|t| match t.trim() {
            "+" | "+1" => Ok(1i8),
            "-" | "-1" => Ok(-1i8),
            other => Err(format!("bad sign {other:?}")),
        })
        .collect();
    let signs = signs?;
    if signs.len() != nvars {
        return Err(format!("expected {nvars} signs, got {}", signs.len()));
    }
    InvolutionAction::diagonal(&signs, twist).map_err(|e| e.to_string())
}

fn fixture_json(name: &str) -> Result<serde_json::Value, String> {
    let pair_doc = |pair: &CubicPair| json!({ "f": poly_json(&pair.f), "l": poly_json(&pair.l) });
    let line_doc = |line: &Line| serde_json::to_value(line).map_err(|e| e.to_string());
    match name {
        "FIX1" => Ok(pair_doc(&fixtures::fix1())),
        "FIX2" => Ok(pair_doc(&fixtures::fix2())),
        "FIX3" => {
            let mut doc = pair_doc(&fixtures::fix3());
            doc["e"] = json!(fixtures::fix3_point()
                .iter()
                .map(format_frac)
                .collect::<Vec<_>>());
            Ok(doc)
        }
        "FIX4" => {
            let fx = fixtures::fix4();
            let mut doc = pair_doc(&fx.pair);
            doc["e"] = json!(fx.e_point.iter().map(format_frac).collect::<Vec<_>>());
            doc["line"] = line_doc(&fx.line)?;
            Ok(doc)
        }
        "fermat-surface" => Ok(poly_json(&fixtures::fermat_surface())),
        "fix1-line" => line_doc(&fixtures::fix1_line()),
        "fix3-line" => line_doc(&fixtures::fix3_line()),
        "fix4-line" => line_doc(&fixtures::fix4().line),
        "fix3-quartic" => {
            let (g, k, l) = fixtures::fix3_quartic();
            Ok(json!({
                "g": poly_json(&g),
                "k": poly_json(&k),
                "l": poly_json(&l),
            }))
        }
        other => Err(format!("unknown fixture {other:?}")),
    }
}
