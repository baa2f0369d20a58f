use clap::{Args, Parser, Subcommand, ValueEnum};
use isolab::error::{Error, Result};
use isolab::isocrystal::hodge_polygon;
use isolab::json;
use isolab::padic::{NewtonPolygon, Rat};
use isolab::presets::{preset, preset_weights};
use isolab::scan::{self, ScanConfig};
use isolab::verify::{self, VerifyConfig};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "isolab", version, about = "Exact p-adic Hodge theory computations")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct Source {
    /// Named preset: ord2, ss2, mf3, ord3, unit2.
    preset: Option<String>,
    /// Isocrystal JSON file ("-" for stdin).
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    prime: Option<u64>,
    /// Degree s of the unramified coefficient field Q_{p^s}.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    precision: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, slopes, Newton polygon and Dieudonné–Manin data of an isocrystal.
    Analyze {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Weak admissibility over sampled filtrations.
    WaScan {
        #[command(flatten)]
        src: Source,
        /// Hodge–Tate weights with multiplicity, e.g. "0,1".
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra filtration evaluated first, as JSON flags {"i": [[vector], ...]}; repeatable.
        #[arg(long)]
        point: Vec<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Runs the property suites: witt, seminorm, robba, isocrystal or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// SVG of the Hodge and/or Newton polygon.
    Polygon {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Seminorm evaluation.
    Seminorm {
        #[command(subcommand)]
        cmd: SeminormCmd,
    },
    /// Robba-ring identities.
    Robba {
        #[command(subcommand)]
        cmd: RobbaCmd,
    },
}

#[derive(Subcommand)]
enum SeminormCmd {
    /// Evaluates a point (evaluator JSON) on an element (element JSON); "@file" reads a file.
    Eval {
        #[arg(long)]
        point: String,
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand)]
enum RobbaCmd {
    /// Diagram, commutation and modification-degree suites.
    Check {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

/// What a command produced and whether it counts as success.
struct Output {
    text: String,
    ok: bool,
}

fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Invalid(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("malformed JSON: {e}")))
}

/// Inline JSON, or the contents of a file when prefixed with '@'.
fn json_arg(arg: &str) -> Result<Value> {
    match arg.strip_prefix('@') {
        Some(path) => parse_json(&read_text(path)?),
        None => parse_json(arg),
    }
}

fn parse_weights(s: &str) -> Result<Vec<i64>> {
    let w = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Invalid(format!("bad weight \"{x}\""))))
        .collect::<Result<Vec<_>>>()?;
    if w.is_empty() {
        return Err(Error::Invalid("empty weight list".into()));
    }
    Ok(w)
}

/// The isocrystal JSON for a source, with flag overrides applied.
fn source_json(src: &Source) -> Result<Value> {
    let mut v = match (&src.preset, &src.input) {
        (Some(_), Some(_)) => return Err(Error::Invalid("give either a preset or --input, not both".into())),
        (Some(name), None) => {
            let p = src.prime.unwrap_or(2);
            let iso = preset(name, p, src.degree.unwrap_or(1), src.precision.unwrap_or(20))?;
            let mut v = json::isocrystal_to_json(&iso);
            v["preset"] = json!(name);
            return Ok(v);
        }
        (None, Some(path)) => parse_json(&read_text(path)?)?,
        (None, None) => return Err(Error::Invalid("no isocrystal: name a preset or pass --input".into())),
    };
    if !v.is_object() {
        return Err(Error::Invalid("isocrystal JSON must be an object".into()));
    }
    if let Some(p) = src.prime {
        v["p"] = json!(p);
    }
    if let Some(s) = src.degree {
        v["s"] = json!(s);
    }
    if let Some(n) = src.precision {
        v["prec"] = json!(n);
    }
    Ok(v)
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| json::rat_to_json(*r)).collect())
}

fn polygon_json(poly: &NewtonPolygon) -> Value {
    Value::Array(poly.vertices().iter().map(|&(x, y)| json!([x, json::rat_to_json(y)])).collect())
}

fn analyze(src: &Source, format: Format) -> Result<Output> {
    let v = source_json(src)?;
    let iso = json::isocrystal_from_json(&v)?;
    let newton = iso.newton_polygon()?;
    if format == Format::Svg {
        return Ok(Output { text: isolab::svg::render(&[("newton", &newton)]), ok: true });
    }
    if format == Format::Csv {
        return Err(Error::Invalid("analyze writes json or svg".into()));
    }
    let dm = match iso.dm_data() {
        Ok(d) => json!({
            "summands": d.summands.iter().map(|(a, b)| json!({"rank": a, "slope": json::rat_to_json(Rat::new(*b, *a))})).collect::<Vec<_>>(),
            "basis": json::matrix_to_json(&d.basis),
        }),
        Err(Error::DmUnavailable(msg)) => json!(format!("DM unavailable: {msg}")),
        Err(e) => return Err(e),
    };
    let report = json!({
        "p": iso.prime(),
        "s": iso.field().degree(),
        "rank": iso.rank(),
        "degree": iso.degree()?,
        "slope": json::rat_to_json(iso.slope()?),
        "newton_slopes": rats(&iso.newton_slopes()?),
        "newton_polygon": polygon_json(&newton),
        "multiplicity_free": iso.is_multiplicity_free()?,
        "dm": dm,
    });
    Ok(Output { text: pretty(&report), ok: true })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn wa_scan(src: &Source, weights: &Option<String>, samples: usize, seed: u64, points: &[String], format: Format) -> Result<Output> {
    let v = source_json(src)?;
    let iso = json::isocrystal_from_json(&v)?;
    let weights = match (weights, &src.preset) {
        (Some(w), _) => parse_weights(w)?,
        (None, Some(name)) => preset_weights(name)?,
        (None, None) => match v.get("filtration").and_then(|f| f.get("jumps")) {
            Some(_) => json::filtered_from_json(&v)?.hodge_tate_weights().to_vec(),
            None => return Err(Error::Invalid("--weights is required for JSON input without a filtration".into())),
        },
    };
    if weights.len() != iso.rank() {
        return Err(Error::Invalid(format!("{} weights for a rank-{} isocrystal", weights.len(), iso.rank())));
    }
    let mut forced = Vec::new();
    for pt in points {
        let flags = json!({"jumps": weights, "flags": json_arg(pt)?});
        let fd = json::filtration_from_json(&flags, &iso)?;
        forced.push(fd.flags().clone());
    }
    let cfg = ScanConfig { isocrystal: iso, weights, samples, seed, forced };
    let rows = scan::run_scan(&cfg)?;
    let summary = scan::summarize(&rows);
    eprintln!(
        "{} points: {} true, {} false, {} unknown{}",
        summary.total,
        summary.wa_true,
        summary.wa_false,
        summary.unknown,
        if summary.exact_path { " (exact path)" } else { "" }
    );
    let text = match format {
        Format::Csv => scan::to_csv(&rows),
        Format::Json => pretty(&scan::to_json(&rows)),
        Format::Svg => return Err(Error::Invalid("wa-scan writes csv or json".into())),
    };
    Ok(Output { text, ok: true })
}

fn verify_cmd(suite: &str, seed: u64, samples: usize) -> Result<Output> {
    let cfg = VerifyConfig { seed, samples };
    let outcomes = verify::run(suite, &cfg)?;
    let ok = outcomes.iter().all(|o| o.passed);
    for o in &outcomes {
        eprintln!("{} {}::{} ({} cases)", if o.passed { "PASS" } else { "FAIL" }, o.suite, o.test, o.cases);
    }
    Ok(Output { text: pretty(&verify::report_json(suite, &cfg, &outcomes)), ok })
}

fn polygon(src: &Source, weights: &Option<String>, format: Format) -> Result<Output> {
    let mut polys: Vec<(&str, NewtonPolygon)> = Vec::new();
    let w = match weights {
        Some(w) => Some(parse_weights(w)?),
        None => None,
    };
    if let Some(w) = &w {
        polys.push(("hodge", hodge_polygon(w)));
    }
    if src.preset.is_some() || src.input.is_some() {
        let v = source_json(src)?;
        if let Some(pts) = v.get("points") {
            let pts: Vec<(i64, Rat)> = pts
                .as_array()
                .ok_or_else(|| Error::Invalid("points must be an array".into()))?
                .iter()
                .map(|pt| {
                    let x = pt.get(0).and_then(|x| x.as_i64()).ok_or_else(|| Error::Invalid("point x must be an integer".into()))?;
                    Ok((x, json::parse_rat(pt.get(1).unwrap_or(&Value::Null))?))
                })
                .collect::<Result<_>>()?;
            polys.push(("polygon", NewtonPolygon::from_points(&pts)?));
        } else if let Some(sl) = v.get("slopes") {
            let sl: Vec<Rat> = sl
                .as_array()
                .ok_or_else(|| Error::Invalid("slopes must be an array".into()))?
                .iter()
                .map(json::parse_rat)
                .collect::<Result<_>>()?;
            polys.push(("newton", NewtonPolygon::from_slopes(&sl)));
        } else {
            let iso = json::isocrystal_from_json(&v)?;
            if w.is_none() {
                if let Some(f) = v.get("filtration") {
                    polys.push(("hodge", json::filtration_from_json(f, &iso)?.hodge_polygon()));
                }
            }
            polys.push(("newton", iso.newton_polygon()?));
        }
    }
    if polys.is_empty() {
        return Err(Error::Invalid("nothing to draw: pass --weights, a preset or --input".into()));
    }
    let text = match format {
        Format::Svg => {
            let refs: Vec<(&str, &NewtonPolygon)> = polys.iter().map(|(l, p)| (*l, p)).collect();
            isolab::svg::render(&refs)
        }
        Format::Json => {
            let mut m = serde_json::Map::new();
            for (l, p) in &polys {
                m.insert(l.to_string(), polygon_json(p));
            }
            if let (Some(h), Some(n)) = (polys.iter().find(|x| x.0 == "hodge"), polys.iter().find(|x| x.0 == "newton")) {
                m.insert("hodge_on_or_below_newton".into(), json!(h.1.lies_on_or_below(&n.1)));
            }
            pretty(&Value::Object(m))
        }
        Format::Csv => return Err(Error::Invalid("polygon writes svg or json".into())),
    };
    Ok(Output { text, ok: true })
}

fn seminorm_eval(point: &str, element: &str) -> Result<Output> {
    let e = json::evaluator_from_json(&json_arg(point)?)?;
    let x = json::element_from_json(&json_arg(element)?)?;
    let v = e.eval(&x)?;
    Ok(Output { text: pretty(&json::seminorm_value_to_json(&v)), ok: true })
}

fn robba_check(seed: u64, samples: usize) -> Result<Output> {
    let cfg = VerifyConfig { seed, samples };
    let outcomes = verify::run("robba", &cfg)?;
    let ok = outcomes.iter().all(|o| o.passed);
    let rows: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"test": o.test, "status": if o.passed { "pass" } else { "fail" }, "residual": o.residual}))
        .collect();
    Ok(Output { text: pretty(&Value::Array(rows)), ok })
}

fn write_out(out: &Option<String>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Invalid(format!("{path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (out, dest) = match &cli.cmd {
        Command::Analyze { src, format, out } => (analyze(src, *format)?, out),
        Command::WaScan { src, weights, samples, seed, point, format, out } => {
            (wa_scan(src, weights, *samples, *seed, point, *format)?, out)
        }
        Command::Verify { suite, seed, samples, out } => (verify_cmd(suite, *seed, *samples)?, out),
        Command::Polygon { src, weights, format, out } => (polygon(src, weights, *format)?, out),
        Command::Seminorm { cmd: SeminormCmd::Eval { point, element } } => (seminorm_eval(point, element)?, &None),
        Command::Robba { cmd: RobbaCmd::Check { seed, samples, out } } => (robba_check(*seed, *samples)?, out),
    };
    write_out(dest, &out.text)?;
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
