mod input;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use brunnel::alexpoly::alexander_of_knot;
use brunnel::brunnian::{self, NkConstruction, NkReport, Reduction};
use brunnel::codec::verification_script;
use brunnel::jsjtree::{JsjTree, PieceLabel};
use brunnel::satellite;
use brunnel::surfacecalc::{
    self, BaseSpec, BrunnianStatus, OmegaValue, RimSurgery, Step, SurfaceComponent, SurfaceLinkDescriptor,
};
use brunnel::{LaurentPolynomial, LinkDiagram};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "brunnel", version, about = "Link diagrams, satellites and Brunnian surface-link bookkeeping")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a DT code and report its size.
    ParseDt { input: String },
    /// Reconstruct a knot diagram from a DT code and print its PD code.
    DtToPd { input: String },
    /// Bing double a component.
    BingDouble {
        input: String,
        #[arg(short, long, default_value_t = 0)]
        component: usize,
        /// Repeat on the same component.
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Untwisted Whitehead double of a component.
    Whitehead {
        input: String,
        #[arg(short, long, default_value_t = 0)]
        component: usize,
        #[arg(long, value_enum, default_value_t = Sign::Positive)]
        sign: Sign,
    },
    /// Linking matrix; the diagonal holds each component's writhe.
    Linking { input: String },
    /// Normalized Alexander polynomial of a knot.
    Alexander { input: String },
    /// Number of irreducible factors of a polynomial in t, with multiplicity.
    FactorCount { polynomial: String },
    /// Fundamental group: Wirtinger presentation or `< gens | rels >` text.
    Pi1 {
        input: String,
        #[arg(long, default_value_t = 50)]
        budget: usize,
    },
    /// Graph-manifold trees.
    #[command(subcommand)]
    Jsj(JsjCommand),
    /// Surface-link descriptors.
    #[command(subcommand)]
    Descriptor(DescriptorCommand),
    /// Build the (n,k) construction.
    NkGenerate(NkArgs),
    /// Check every proper set of colors of the (n,k) construction.
    NkCheck(NkArgs),
    /// Script for an external hyperbolicity and symmetry check.
    ExportVerify {
        input: String,
        #[arg(long, default_value = "K")]
        label: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Positive,
    Negative,
}

#[derive(Subcommand)]
enum JsjCommand {
    /// Attach Borromean pieces at the distinguished vertex.
    Extend {
        /// Tree JSON; defaults to a single knot-exterior vertex.
        input: Option<String>,
        #[arg(long, default_value = "K")]
        knot: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Tree of the double branched cover.
    Cover {
        input: String,
        #[arg(long)]
        dot: bool,
    },
    /// Label-preserving automorphisms.
    Aut { input: String },
    /// Classify the tree against the two rigidity conditions.
    Rigidity { input: String },
}

#[derive(Subcommand)]
enum DescriptorCommand {
    /// Start a descriptor from a named base.
    New(NewArgs),
    Show { input: String },
    /// Bing double the first component.
    Bd {
        input: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Undo the last Bing double through the branched cover.
    Cover {
        input: String,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Band two components together.
    Band { input: String, i: usize, j: usize },
    /// Rim surgery with a knot, updating the invariant.
    Omega(OmegaArgs),
    /// Record a value of the invariant.
    AssertOmega {
        input: String,
        /// A number or `-inf`.
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long)]
        reason: String,
    },
    Color {
        input: String,
        #[arg(long)]
        component: usize,
        #[arg(long)]
        color: String,
    },
    /// Split union with a second descriptor's base.
    Adjoin { input: String, other: String },
    /// Pairwise verdicts for descriptors differing by rim surgeries.
    Ledger {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseKind {
    Disk,
    TrivialDisk,
    Sigma0,
    Sigma,
    RLink,
    Paired,
}

#[derive(Args)]
struct NewArgs {
    #[arg(long, value_enum, default_value_t = BaseKind::Disk)]
    base: BaseKind,
    #[arg(long, default_value = "D")]
    name: String,
    /// Boundary knot of a disk base.
    #[arg(long)]
    knot: Option<String>,
    /// Mark the boundary as a nontrivial knot.
    #[arg(long)]
    nontrivial: bool,
    #[arg(long, default_value_t = 1)]
    genus: u32,
    #[arg(long, default_value_t = 0)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    s: u32,
}

#[derive(Args)]
struct OmegaArgs {
    input: String,
    /// Knot for the surgery; its Alexander polynomial is computed.
    #[arg(long, conflicts_with = "alexander")]
    knot: Option<String>,
    #[arg(long)]
    alexander: Option<String>,
    #[arg(long, default_value = "J")]
    knot_name: String,
    #[arg(long, default_value_t = 0)]
    component: usize,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    twist: i64,
    #[arg(long, default_value = "C")]
    curve: String,
}

#[derive(Args)]
struct NkArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// `nontrivial-disk`, or a descriptor JSON file.
    #[arg(long, default_value = "nontrivial-disk")]
    base: String,
    /// Boundary knot for the base, used to realize the boundary diagram.
    #[arg(long)]
    knot: Option<String>,
}

pub struct Failure(String);

impl Failure {
    pub fn new(msg: impl Into<String>) -> Self {
        Failure(msg.into())
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Output {
    text: String,
    json: Value,
}

fn out(text: impl Into<String>, json: Value) -> Result<Output, Failure> {
    Ok(Output { text: text.into(), json })
}

fn link_json(d: &LinkDiagram) -> Value {
    json!({
        "pd": d.to_pd_text(),
        "components": d.component_count(),
        "crossings": d.crossing_count(),
    })
}

fn link_out(d: LinkDiagram) -> Result<Output, Failure> {
    out(d.to_pd_text(), link_json(&d))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::ParseDt { input } => {
            let c = input::dt(&input)?;
            let sizes: Vec<usize> = c.components().iter().map(Vec::len).collect();
            let mut text = format!(
                "{}, {}",
                plural(c.component_count(), "component", "components"),
                plural(c.crossing_count(), "crossing", "crossings")
            );
            if sizes.len() > 1 {
                let _ = write!(text, "\ncomponent sizes: {}", sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));
            }
            out(
                text,
                json!({
                    "dt": c.to_string(),
                    "components": c.component_count(),
                    "component_sizes": sizes,
                    "crossings": c.crossing_count(),
                }),
            )
        }
        Command::DtToPd { input } => link_out(input::dt(&input)?.to_diagram()?),
        Command::BingDouble { input, component, times } => {
            let mut d = input::link(&input)?;
            for _ in 0..times {
                d = satellite::bing_double(&d, component)?;
            }
            link_out(d)
        }
        Command::Whitehead { input, component, sign } => {
            let s = match sign {
                Sign::Positive => 1,
                Sign::Negative => -1,
            };
            link_out(satellite::whitehead_double(&input::link(&input)?, component, s)?)
        }
        Command::Linking { input } => {
            let m = input::link(&input)?.linking_matrix();
            let text = m
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("\n");
            out(text, json!({ "matrix": m }))
        }
        Command::Alexander { input } => {
            let p = alexander_of_knot(&input::link(&input)?)?;
            let count = p.factor_count()?;
            out(p.to_string(), json!({ "alexander": p.to_string(), "factor_count": count }))
        }
        Command::FactorCount { polynomial } => {
            let p: LaurentPolynomial = polynomial.parse()?;
            let count = p.factor_count()?;
            out(
                count.to_string(),
                json!({ "polynomial": p.normalize().to_string(), "factor_count": count }),
            )
        }
        Command::Pi1 { input, budget } => {
            let g = input::presentation(&input)?;
            let t = g.tietze_simplify(budget);
            let ab = g.abelianization();
            let certified = g.is_infinite_cyclic_certificate(budget);
            let text = format!(
                "presentation: {g}\nsimplified: {}\nmoves: {}{}\nabelianization: {ab}\ninfinite cyclic: {}",
                t.presentation,
                t.moves,
                if t.exhausted { " (budget exhausted)" } else { "" },
                if certified { "certified" } else { "not certified" }
            );
            out(
                text,
                json!({
                    "presentation": g.to_string(),
                    "simplified": t.presentation.to_string(),
                    "moves": t.moves,
                    "exhausted": t.exhausted,
                    "abelianization": { "free_rank": ab.free_rank, "torsion": ab.torsion, "text": ab.to_string() },
                    "infinite_cyclic_certified": certified,
                }),
            )
        }
        Command::Jsj(cmd) => jsj(cmd),
        Command::Descriptor(cmd) => descriptor(cmd),
        Command::NkGenerate(args) => {
            let (c, knot) = nk(&args)?;
            let mut text = format!(
                "({},{}) construction: {}, {}\n",
                c.n,
                c.k,
                plural(c.copy_count(), "copy", "copies"),
                plural(c.bands.len(), "band", "bands")
            );
            for (i, cols) in c.copies.iter().enumerate() {
                let names: Vec<String> = cols.iter().map(|&x| brunnian::color_name(x)).collect();
                let _ = writeln!(text, "copy {i}: {}", names.join(" "));
            }
            for b in &c.bands {
                let _ = writeln!(text, "band {}: copy {} -> copy {}", brunnian::color_name(b.color), b.copy, b.target);
            }
            let mut j = to_json(&c);
            if let Some(k) = knot {
                let d = c.realize(&k)?;
                let _ = write!(text, "boundary: {}", d.to_pd_text());
                j["boundary"] = link_json(&d);
            }
            out(text.trim_end(), j)
        }
        Command::NkCheck(args) => {
            let (c, _) = nk(&args)?;
            let r = c.check();
            out(report_text(&r), to_json(&r))
        }
        Command::ExportVerify { input, label } => {
            let c = input::dt(&input)?;
            let s = verification_script(&c, &label)?;
            out(s.trim_end(), json!({ "label": label, "dt": c.to_string(), "script": s }))
        }
    }
}

fn tree_out(t: JsjTree, dot: bool) -> Result<Output, Failure> {
    if dot {
        return out(t.to_dot().trim_end(), to_json(&t));
    }
    let mut text = format!(
        "{}, {}, distinguished {}\n",
        plural(t.vertex_count(), "vertex", "vertices"),
        plural(t.edges().len(), "edge", "edges"),
        t.distinguished().map_or("none".to_string(), |v| v.to_string())
    );
    for (v, l) in t.vertices().iter().enumerate() {
        let marked: Vec<String> = l.marked_boundaries.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(
            text,
            "{v}: {:?}, {}, external [{}]",
            l.kind,
            plural(l.boundary_count, "boundary", "boundaries"),
            marked.join(" ")
        );
    }
    let edges: Vec<String> = t.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    let _ = write!(text, "edges: {}", edges.join(" "));
    out(text, to_json(&t))
}

fn jsj(cmd: JsjCommand) -> Result<Output, Failure> {
    match cmd {
        JsjCommand::Extend { input, knot, times, dot } => {
            let t = match input {
                Some(i) => input::tree(&i)?,
                None => JsjTree::single(PieceLabel::knot_exterior(&knot))?,
            };
            tree_out(t.bing_extend_n(times)?, dot)
        }
        JsjCommand::Cover { input, dot } => tree_out(input::tree(&input)?.covering_tree()?, dot),
        JsjCommand::Aut { input } => {
            let a = input::tree(&input)?.automorphisms()?;
            let mut text = format!("order {}", a.len());
            for p in &a {
                let _ = write!(text, "\n{}", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            }
            out(text, json!({ "order": a.len(), "automorphisms": a }))
        }
        JsjCommand::Rigidity { input } => {
            let c = input::tree(&input)?.rigidity();
            out(format!("{c:?}"), json!({ "classification": to_json(&c) }))
        }
    }
}

fn descriptor_out(d: SurfaceLinkDescriptor) -> Result<Output, Failure> {
    out(d.to_string().trim_end(), to_json(&d))
}

fn descriptor(cmd: DescriptorCommand) -> Result<Output, Failure> {
    match cmd {
        DescriptorCommand::New(a) => descriptor_out(new_descriptor(&a)?),
        DescriptorCommand::Show { input } => descriptor_out(input::descriptor(&input)?),
        DescriptorCommand::Bd { input, times } => descriptor_out(input::descriptor(&input)?.bing_double_first_n(times)?),
        DescriptorCommand::Cover { input, degree } => {
            let lift = input::descriptor(&input)?.covering_lift(degree)?;
            let mut text = lift.descriptor.to_string();
            let _ = write!(text, "liftability: {:?}", lift.liftability);
            if let Some(ref d) = lift.cover_diagram {
                let _ = write!(text, "\ncover boundary: {}", d.to_pd_text());
            }
            out(text, to_json(&lift))
        }
        DescriptorCommand::Band { input, i, j } => descriptor_out(input::descriptor(&input)?.band_join(i, j)?),
        DescriptorCommand::Omega(a) => {
            let d = input::descriptor(&a.input)?;
            let alexander = match (&a.knot, &a.alexander) {
                (Some(k), _) => alexander_of_knot(&input::link(k)?)?,
                (None, Some(p)) => p.parse()?,
                (None, None) => return Err(Failure::new("rim surgery needs --knot or --alexander")),
            };
            descriptor_out(d.rim_surgery(RimSurgery {
                component: a.component,
                curve: a.curve,
                knot: a.knot_name,
                twist: a.twist,
                alexander,
            })?)
        }
        DescriptorCommand::AssertOmega { input, value, reason } => {
            let value: OmegaValue = serde_json::from_value(match value.parse::<u64>() {
                Ok(n) => json!(n),
                Err(_) => json!(value),
            })
            .map_err(|_| Failure::new(format!("omega value {value:?} is neither a number nor -inf")))?;
            descriptor_out(input::descriptor(&input)?.apply(Step::AssertOmega { value, reason })?)
        }
        DescriptorCommand::Color { input, component, color } => {
            descriptor_out(input::descriptor(&input)?.apply(Step::Color { component, color })?)
        }
        DescriptorCommand::Adjoin { input, other } => {
            let o = input::descriptor(&other)?;
            let Some(Step::Base(b)) = o.history().first() else {
                return Err(Failure::new("second descriptor has no base step"));
            };
            descriptor_out(input::descriptor(&input)?.apply(Step::Adjoin(b.clone()))?)
        }
        DescriptorCommand::Ledger { inputs } => {
            let family = inputs.iter().map(|i| input::descriptor(i)).collect::<Result<Vec<_>, _>>()?;
            let m = surfacecalc::distinctness_ledger(&family)?;
            let text = m
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| to_json(v).as_str().unwrap_or_default().to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect::<Vec<_>>()
                .join("\n");
            out(text, json!({ "verdicts": m }))
        }
    }
}

fn new_descriptor(a: &NewArgs) -> Result<SurfaceLinkDescriptor, Failure> {
    let knot = a.knot.as_deref().map(input::link).transpose()?;
    Ok(match a.base {
        BaseKind::Disk => {
            let nontrivial = a.nontrivial
                || match knot {
                    Some(ref k) if k.component_count() == 1 => !alexander_of_knot(k)?.is_unit(),
                    _ => false,
                };
            SurfaceLinkDescriptor::base_disk(&a.name, knot, nontrivial)
        }
        BaseKind::TrivialDisk => SurfaceLinkDescriptor::new(BaseSpec {
            name: a.name.clone(),
            components: vec![SurfaceComponent::trivial_disk()],
            boundary: Some(LinkDiagram::unknot()),
            brunnian_status: BrunnianStatus::Brunnian,
            omega: None,
            nontrivial_boundary: false,
            assumptions: BTreeSet::new(),
        })?,
        BaseKind::Sigma0 => SurfaceLinkDescriptor::new(surfacecalc::sigma0())?,
        BaseKind::Sigma => surfacecalc::sigma_rs(a.r, a.s)?,
        BaseKind::RLink => SurfaceLinkDescriptor::new(surfacecalc::r_link(a.genus))?,
        BaseKind::Paired => brunnian::paired_base(&a.name, knot)?,
    })
}

fn nk(args: &NkArgs) -> Result<(NkConstruction, Option<LinkDiagram>), Failure> {
    let knot = args.knot.as_deref().map(input::link).transpose()?;
    let base = if args.base == "nontrivial-disk" {
        SurfaceLinkDescriptor::base_disk("D", knot.clone(), true)
    } else {
        input::descriptor(&args.base)?
    };
    let knot = knot.or_else(|| base.boundary().cloned());
    Ok((brunnian::generate_nk(args.n, args.k, &base)?, knot))
}

fn report_text(r: &NkReport) -> String {
    let mut text = String::new();
    for c in &r.cases {
        let reduction = match &c.reduction {
            Reduction::Unlink => "unlink".to_string(),
            Reduction::BingDouble { copy, depth } => format!("BD^{depth}(D) carried by copy {copy}"),
            Reduction::ContainsNontrivial { witness } => format!("contains {}", witness.join(",")),
            Reduction::NoDistinguishedCopy { candidates } => format!("no single full copy ({} candidates)", candidates.len()),
        };
        let trace: Vec<String> = c
            .trace
            .iter()
            .map(|s| {
                let arrow = match s.direction {
                    brunnian::Direction::Rightward => ">",
                    brunnian::Direction::Leftward => "<",
                };
                format!("{}{arrow}", s.copy)
            })
            .collect();
        let _ = writeln!(
            text,
            "{:<14} {:<28} {:<24} {}",
            c.colors.join(","),
            reduction,
            trace.join(" "),
            if c.passed { "pass" } else { "FAIL" }
        );
    }
    let failed = r.cases.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        let _ = write!(text, "({},{}): {}, all passed", r.n, r.k, plural(r.cases.len(), "case", "cases"));
    } else {
        let _ = write!(text, "({},{}): {failed} of {} cases failed", r.n, r.k, r.cases.len());
    }
    text
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(o) => {
            let text = if json {
                serde_json::to_string_pretty(&o.json).expect("JSON values serialize")
            } else {
                o.text
            };
            // a closed pipe downstream is not an error here
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
