use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morita_core::algebra::{algebra_unit, check_matrix_algebra_iso, AlgebraElement, ConvolutionAlgebra};
use morita_core::bibundle::{
    check_pentagon, check_triangle, compose_bibundles, is_morita_equivalence, pullback_rep, EquivariantMap,
};
use morita_core::module::{check_serre_swan, gamma, reconstruct};
use morita_core::morita::{
    check_mod_composition, check_natural_square, check_omega, check_omega_associativity, check_sigma,
    check_unit_coherence, mod_functor,
};
use morita_core::rep::intertwiner_space;
use morita_core::workspace::{Document, Entry, Workspace};
use morita_core::{CModule, Error, FiniteGroupoid, PrincipalBibundle, Report, Representation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "morita", version, about = "Exact checks for finite groupoids, their representations and bibundles")]
struct Cli {
    /// Object files to load before running the command.
    #[arg(short, long = "input", global = true)]
    input: Vec<PathBuf>,
    /// Workspace file listing member documents.
    #[arg(long, global = true)]
    workspace: Vec<PathBuf>,
    /// Where to write the result instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every loaded object.
    Validate {
        /// Further files to load and validate.
        paths: Vec<PathBuf>,
    },
    /// Run a theorem or coherence check.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Compute a derived object and write it as a document.
    #[command(subcommand)]
    Compute(ComputeCmd),
    /// Write the built-in fixtures as documents into a directory.
    Fixtures {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Γ and the reconstruction functor on a family of objects.
    SerreSwan {
        #[arg(long)]
        groupoid: String,
        #[arg(long, value_delimiter = ',')]
        /// Defaults to the witness family of the groupoid.
        reps: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        modules: Vec<String>,
    },
    /// σ_P(E) is a module isomorphism.
    Sigma {
        #[arg(long)]
        bibundle: String,
        #[arg(long, value_delimiter = ',')]
        /// Defaults to the witness family of the groupoid.
        reps: Vec<String>,
    },
    /// The naturality square of σ_P over a basis of Hom(E, F).
    NaturalSquare(NaturalSquareArgs),
    /// Biprincipality, with the opposite bundle and unit maps.
    Morita {
        #[arg(long)]
        bibundle: String,
    },
    /// C(pair groupoid on n objects) against n×n matrix units.
    MatrixAlgebra {
        #[arg(long)]
        n: usize,
    },
    /// Pentagon, triangle and Ω coherence on a chain of four bibundles.
    Coherence {
        /// Four composable bibundles; defaults to the fixture chain.
        #[arg(long, value_delimiter = ',')]
        chain: Vec<String>,
    },
}

#[derive(Args)]
struct NaturalSquareArgs {
    #[arg(long)]
    bibundle: String,
    #[arg(long)]
    source: String,
    #[arg(long)]
    target: String,
}

#[derive(Subcommand)]
enum ComputeCmd {
    Convolve {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    Gamma {
        #[arg(long)]
        rep: String,
        /// Groupoid for witness-family names such as `sign`.
        #[arg(long)]
        groupoid: Option<String>,
    },
    Reconstruct {
        #[arg(long)]
        module: String,
    },
    Compose {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    Pullback {
        #[arg(long)]
        bibundle: String,
        #[arg(long)]
        rep: String,
    },
    Modfunctor {
        #[arg(long)]
        bibundle: String,
        #[arg(long)]
        module: String,
    },
}

/// Parse and lookup failures exit with 2, domain failures with 1.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json(_)
            | Error::Scalar(_)
            | Error::Io(_)
            | Error::UnknownName(_)
            | Error::UnknownObject(_)
            | Error::UnknownArrow(_)
            | Error::UnknownPoint(_)
            | Error::Duplicate(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

enum Outcome {
    Report {
        command: String,
        report: Report,
        extra: Option<(String, Value)>,
    },
    Document(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let mut ws = Workspace::new();
    for path in cli.workspace.iter().chain(&cli.input) {
        ws.load_path(path)?;
    }
    let outcome = match &cli.command {
        Command::Validate { paths } => {
            for p in paths {
                ws.load_path(p)?;
            }
            Outcome::Report {
                command: "validate".into(),
                report: ws.validate_all(),
                extra: None,
            }
        }
        Command::Check(c) => check(&mut ws, c)?,
        Command::Compute(c) => Outcome::Document(compute(&mut ws, c)?),
        Command::Fixtures { dir } => {
            let n = export_fixtures(dir)?;
            Outcome::Document(format!("{{\n  \"written\": {n}\n}}\n"))
        }
    };
    let (text, code) = match outcome {
        Outcome::Report { command, report, extra } => {
            let code = if report.all_pass() { 0 } else { 1 };
            (render(cli.format, &command, &report, extra), code)
        }
        Outcome::Document(doc) => (doc, 0),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn render(format: Format, command: &str, report: &Report, extra: Option<(String, Value)>) -> String {
    match format {
        Format::Json => {
            let mut v = json!({
                "command": command,
                "pass": report.all_pass(),
                "checks": report.checks,
            });
            if let Some((k, x)) = extra {
                v[k] = x;
            }
            let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                match &c.witness {
                    Some(w) => s.push_str(&format!("{status}  {}  ({w})\n", c.name)),
                    None => s.push_str(&format!("{status}  {}\n", c.name)),
                }
            }
            let passed = report.checks.iter().filter(|c| c.pass).count();
            s.push_str(&format!("{command}: {passed}/{} checks passed\n", report.checks.len()));
            s
        }
    }
}

/// A name in the workspace, or a path to a document that is loaded first.
fn resolve(ws: &mut Workspace, arg: &str) -> Result<String, Error> {
    if ws.get(arg).is_some() || !Path::new(arg).is_file() {
        return Ok(arg.to_string());
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    let name = Document::parse(&text)?.name().unwrap_or(stem).to_string();
    if ws.get(&name).is_some() {
        return Ok(name);
    }
    let names = ws.load_path(path)?;
    names
        .into_iter()
        .next_back()
        .ok_or_else(|| Error::Json(format!("{arg}: no object")))
}

fn groupoid_arg(ws: &mut Workspace, arg: &str) -> Result<Arc<FiniteGroupoid>, Error> {
    let name = resolve(ws, arg)?;
    ws.groupoid(&name)
}

fn bibundle_arg(ws: &mut Workspace, arg: &str) -> Result<PrincipalBibundle, Error> {
    let name = resolve(ws, arg)?;
    ws.bibundle(&name)
}

/// The named representations of `g`, or its witness family when none are named.
fn rep_family(ws: &mut Workspace, g: &Arc<FiniteGroupoid>, reps: &[String]) -> Result<Vec<(String, Representation)>, Error> {
    if reps.is_empty() {
        return ws.fixtures().witness_family(g);
    }
    let mut out = Vec::new();
    for r in reps {
        let name = resolve(ws, r)?;
        out.push((r.clone(), ws.representation_on(g, &name)?));
    }
    Ok(out)
}

fn check(ws: &mut Workspace, c: &CheckCmd) -> Result<Outcome, Error> {
    let report = |command: &str, report: Report| Outcome::Report {
        command: command.into(),
        report,
        extra: None,
    };
    Ok(match c {
        CheckCmd::SerreSwan { groupoid, reps, modules } => {
            let g = groupoid_arg(ws, groupoid)?;
            let es = rep_family(ws, &g, reps)?;
            let mut ms = Vec::new();
            for m in modules {
                let name = resolve(ws, m)?;
                ms.push((m.clone(), ws.module(&name)?));
            }
            report("check serre-swan", check_serre_swan(&g, &es, &ms))
        }
        CheckCmd::Sigma { bibundle, reps } => {
            let p = bibundle_arg(ws, bibundle)?;
            let mut out = Report::new();
            for (r, e) in rep_family(ws, p.right(), reps)? {
                for ch in check_sigma(&p, &e).checks {
                    out.record(format!("{r}: {}", ch.name), ch.pass, ch.witness);
                }
            }
            report("check sigma", out)
        }
        CheckCmd::NaturalSquare(a) => {
            let p = bibundle_arg(ws, &a.bibundle)?;
            let src = resolve(ws, &a.source)?;
            let tgt = resolve(ws, &a.target)?;
            let e = ws.representation_on(p.right(), &src)?;
            let f = ws.representation_on(p.right(), &tgt)?;
            let mut out = Report::new();
            let basis = intertwiner_space(&e, &f)?;
            out.pass(format!("Hom({}, {}) has dimension {}", a.source, a.target, basis.len()));
            for (k, phi) in basis.iter().enumerate() {
                for ch in check_natural_square(&p, phi).checks {
                    out.record(format!("phi[{k}]: {}", ch.name), ch.pass, ch.witness);
                }
            }
            report("check natural-square", out)
        }
        CheckCmd::Morita { bibundle } => {
            let p = bibundle_arg(ws, bibundle)?;
            let result = is_morita_equivalence(&p)?;
            let mut out = Report::new();
            out.record("biprincipal", result.is_equivalence, result.witness.clone());
            let extra = result.certificate.map(|cert| {
                for (name, m) in [("P ⊗ P̄ ≅ G", &cert.left_unit), ("P̄ ⊗ P ≅ H", &cert.right_unit)] {
                    let v = m.validate();
                    out.record(name, v.is_valid(), (!v.is_valid()).then(|| format!("{:?}", v.violations)));
                }
                let opposite: Value =
                    serde_json::from_str(&Entry::Bibundle(cert.opposite.clone()).to_json(&format!("{}_op", p.name())))
                        .expect("document is JSON");
                (
                    "certificate".to_string(),
                    json!({
                        "opposite": opposite,
                        "left_unit": point_map(&cert.left_unit),
                        "right_unit": point_map(&cert.right_unit),
                    }),
                )
            });
            Outcome::Report {
                command: "check morita".into(),
                report: out,
                extra,
            }
        }
        CheckCmd::MatrixAlgebra { n } => report("check matrix-algebra", check_matrix_algebra_iso(*n)),
        CheckCmd::Coherence { chain } => {
            let [p, q, r, s] = if chain.is_empty() {
                ws.fixtures().chain()?
            } else {
                let names: Vec<String> = chain.iter().map(|c| resolve(ws, c)).collect::<Result<_, _>>()?;
                let bs = names.iter().map(|n| ws.bibundle(n)).collect::<Result<Vec<_>, _>>()?;
                bs.try_into()
                    .map_err(|_| Error::Json("--chain needs exactly four bibundles".into()))?
            };
            let mut out = Report::new();
            out.extend(check_pentagon(&p, &q, &r, &s));
            out.extend(check_triangle(&p, &q));
            out.extend(check_triangle(&r, &s));
            for (x, y) in [(&p, &q), (&q, &r), (&r, &s)] {
                for ch in check_omega(x, y).checks {
                    out.record(format!("{}⊗{}: {}", x.name(), y.name(), ch.name), ch.pass, ch.witness);
                }
            }
            out.extend(check_omega_associativity(&p, &q, &r));
            out.extend(check_omega_associativity(&q, &r, &s));
            for b in [&p, &q, &r, &s] {
                for ch in check_unit_coherence(b).checks {
                    out.record(format!("{}: {}", b.name(), ch.name), ch.pass, ch.witness);
                }
            }
            let g = r.right().clone();
            for (name, e) in ws.fixtures().witness_family(&g)? {
                for ch in check_mod_composition(&q, &r, &e).checks {
                    out.record(format!("{name}: {}", ch.name), ch.pass, ch.witness);
                }
            }
            report("check coherence", out)
        }
    })
}

fn point_map(m: &EquivariantMap) -> Value {
    let map: serde_json::Map<String, Value> = m
        .source
        .points()
        .map(|p| {
            (
                m.source.point_name(p).to_string(),
                Value::String(m.target.point_name(m.apply(p)).to_string()),
            )
        })
        .collect();
    Value::Object(map)
}

fn compute(ws: &mut Workspace, c: &ComputeCmd) -> Result<String, Error> {
    Ok(match c {
        ComputeCmd::Convolve { a, b } => {
            let (na, nb) = (resolve(ws, a)?, resolve(ws, b)?);
            let (x, y) = (ws.element(&na)?, ws.element(&nb)?);
            let alg = ConvolutionAlgebra::new(x.groupoid().clone());
            Entry::Element(alg.convolve(&x, &y)?).to_json(&format!("{na}*{nb}"))
        }
        ComputeCmd::Gamma { rep, groupoid } => {
            let name = resolve(ws, rep)?;
            let e = match groupoid {
                Some(g) => {
                    let g = groupoid_arg(ws, g)?;
                    ws.representation_on(&g, &name)?
                }
                None => ws.representation(&name)?,
            };
            Entry::Module(gamma(&e)?).to_json(&format!("gamma({name})"))
        }
        ComputeCmd::Reconstruct { module } => {
            let name = resolve(ws, module)?;
            let m = ws.module(&name)?.checked()?;
            Entry::Representation(reconstruct(&m)?).to_json(&format!("R({name})"))
        }
        ComputeCmd::Compose { left, right } => {
            let (l, r) = (resolve(ws, left)?, resolve(ws, right)?);
            let c = compose_bibundles(&ws.bibundle(&l)?, &ws.bibundle(&r)?)?;
            Entry::Bibundle(c.bundle).to_json(&format!("{l}⊗{r}"))
        }
        ComputeCmd::Pullback { bibundle, rep } => {
            let pn = resolve(ws, bibundle)?;
            let p = ws.bibundle(&pn)?;
            let en = resolve(ws, rep)?;
            let e = ws.representation_on(p.right(), &en)?;
            Entry::Representation(pullback_rep(&p, &e)?).to_json(&format!("{pn}*{en}"))
        }
        ComputeCmd::Modfunctor { bibundle, module } => {
            let pn = resolve(ws, bibundle)?;
            let mn = resolve(ws, module)?;
            let m: CModule = ws.module(&mn)?.checked()?;
            let out = mod_functor(&ws.bibundle(&pn)?, &m)?;
            Entry::Module(out.module).to_json(&format!("Mod({pn})({mn})"))
        }
    })
}

/// Groupoids, witness representations, sample modules, algebra elements
/// and bibundles,
/// plus a `workspace.json` listing them in dependency order.
fn export_fixtures(dir: &Path) -> Result<usize, Error> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let ws = Workspace::new();
    let fx = ws.fixtures();
    let mut files: Vec<(String, String)> = Vec::new();
    for g in fx.groupoids() {
        files.push((g.name().to_string(), Entry::Groupoid(g.clone()).to_json(g.name())));
    }
    for g in fx.groupoids() {
        for (w, e) in fx.witness_family(g)? {
            let name = format!("{}_{w}", g.name());
            files.push((name.clone(), Entry::Representation(e).to_json(&name)));
        }
    }
    let modules = [
        ("regular_mod", CModule::regular(fx.groupoid("z2"))?),
        ("blocks_1_2", CModule::blocks(fx.groupoid("unit2"), &[1, 2])?),
    ];
    for (name, m) in modules {
        files.push((name.to_string(), Entry::Module(m).to_json(name)));
    }
    let z2 = fx.groupoid("z2");
    let elements = [
        ("z2_delta_s", AlgebraElement::delta(z2.clone(), z2.arrow("s")?)),
        ("z2_zero", AlgebraElement::zero(z2.clone())),
        ("z2_unit", algebra_unit(z2)),
    ];
    for (name, a) in elements {
        files.push((name.to_string(), Entry::Element(a).to_json(name)));
    }
    for p in fx.bibundles()? {
        files.push((p.name().to_string(), Entry::Bibundle(p.clone()).to_json(p.name())));
    }
    for (name, text) in &files {
        std::fs::write(dir.join(format!("{name}.json")), text).map_err(io)?;
    }
    let members: Vec<String> = files.iter().map(|(n, _)| format!("{n}.json")).collect();
    let mut ws_doc = serde_json::to_string_pretty(&json!({ "members": members })).expect("serializes");
    ws_doc.push('\n');
    std::fs::write(dir.join("workspace.json"), ws_doc).map_err(io)?;
    Ok(files.len())
}
