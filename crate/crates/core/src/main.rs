use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use kirbykit::alexander::{knot_alexander, link_alexander, single_variable};
use kirbykit::claims::{verify_claims, VerifyOptions};
use kirbykit::fourman::{forms_isomorphic, homology, FormVerdict, GramJson, HandleJson};
use kirbykit::linkdiag::{
    hopf_link, torus_link_2_2n, trefoil, twist_knot_with_clasp, two_braid_closure, unknot, Clasp, PDCode, PDJson,
};
use kirbykit::surgery::{basic_classes, e2_twist_sw, elliptic_sw, link_operation_sw, SWPolynomial, SWReport};

#[derive(Parser)]
#[command(name = "kirbykit", version, about = "Exact invariants of Kirby diagrams and knot surgeries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Alexander polynomial of a diagram (family spec or PD JSON)
    Alex {
        /// `twist-knot:N`, `torus-link:2,K`, `unknot`, `trefoil`, `hopf`, a JSON file or inline JSON
        input: String,
        /// Keep one variable per component instead of reducing links to one variable
        #[arg(long)]
        multivariable: bool,
        #[arg(long, value_enum, default_value_t = ClaspArg::Standard)]
        clasp: ClaspArg,
        #[arg(long)]
        json: bool,
    },
    /// Homology and intersection form of a handle decomposition
    Homology {
        /// `{"one_handles":..,"Q":..,"B":..}` as a file or inline JSON
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Invariants of an intersection form, optionally compared with another
    Form {
        /// `{"gram":..,"labels":..}` as a file or inline JSON
        input: String,
        #[arg(long)]
        compare: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Seiberg-Witten polynomial and basic classes of a surgery family
    Sw {
        /// `twist-knot:N` (knot surgery on E(2)), `torus-link:2,K` (link operation) or `elliptic:N`
        family: String,
        #[arg(long, default_value_t = 1)]
        scale: i64,
        #[arg(long, value_enum, default_value_t = ClaspArg::Standard)]
        clasp: ClaspArg,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every claim of the plug and exotic-structure arguments
    VerifyPaper {
        #[arg(long, value_enum, default_value_t = ClaspArg::Standard)]
        clasp: ClaspArg,
        #[arg(long, default_value_t = 1)]
        scale: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClaspArg {
    Standard,
    Alternate,
}

impl From<ClaspArg> for Clasp {
    fn from(c: ClaspArg) -> Self {
        match c {
            ClaspArg::Standard => Clasp::Standard,
            ClaspArg::Alternate => Clasp::Alternate,
        }
    }
}

enum Failure {
    /// Unreadable or malformed input.
    Parse(String),
    /// Well-formed input describing an invalid object.
    Semantic(String),
    /// A claim did not reproduce.
    Claims,
}

impl Failure {
    fn semantic(e: impl ToString) -> Self {
        Failure::Semantic(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Semantic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Alex { input, multivariable, clasp, json } => alex(&input, multivariable, clasp.into(), json),
        Command::Homology { input, json } => homology_cmd(&input, json),
        Command::Form { input, compare, json } => form_cmd(&input, compare.as_deref(), json),
        Command::Sw { family, scale, clasp, json } => sw_cmd(&family, scale, clasp.into(), json),
        Command::VerifyPaper { clasp, scale, json } => {
            let report = verify_claims(VerifyOptions { clasp: clasp.into(), scale });
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("{report}");
            }
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::Claims)
            }
        }
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Parse(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{arg}: {e}")))
}

enum Family {
    TwistKnot(i64),
    TorusLink(i64),
    Unknot,
    Trefoil,
    Hopf,
    Elliptic(i64),
}

fn parse_int(s: &str, spec: &str) -> Result<i64, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Parse(format!("bad integer {s:?} in family spec {spec:?}")))
}

fn parse_family(spec: &str) -> Result<Option<Family>, Failure> {
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let fam = match (name, arg) {
        ("twist-knot", Some(a)) => Family::TwistKnot(parse_int(a, spec)?),
        ("torus-link", Some(a)) => {
            let (p, q) = a
                .split_once(',')
                .ok_or_else(|| Failure::Parse(format!("expected torus-link:2,K, got {spec:?}")))?;
            if parse_int(p, spec)? != 2 {
                return Err(Failure::Semantic(format!("only 2-strand torus links are supported, got {spec:?}")));
            }
            Family::TorusLink(parse_int(q, spec)?)
        }
        ("elliptic", Some(a)) => Family::Elliptic(parse_int(a, spec)?),
        ("unknot", None) => Family::Unknot,
        ("trefoil", None) => Family::Trefoil,
        ("hopf", None) => Family::Hopf,
        _ => return Ok(None),
    };
    Ok(Some(fam))
}

fn diagram(input: &str, clasp: Clasp) -> Result<PDCode, Failure> {
    match parse_family(input)? {
        Some(Family::TwistKnot(n)) => twist_knot_with_clasp(n, clasp).map_err(Failure::semantic),
        Some(Family::TorusLink(k)) => {
            if k < 1 {
                Err(Failure::Semantic(format!("crossing count must be positive, got {k}")))
            } else {
                Ok(two_braid_closure(k as usize))
            }
        }
        Some(Family::Unknot) => Ok(unknot()),
        Some(Family::Trefoil) => Ok(trefoil()),
        Some(Family::Hopf) => Ok(hopf_link()),
        Some(Family::Elliptic(_)) => Err(Failure::Semantic("elliptic surfaces are not diagrams".into())),
        None if input.contains(['{', '.', '/']) => read_json::<PDJson>(input)?.to_pd().map_err(Failure::semantic),
        None => Err(Failure::Parse(format!("unknown family spec {input:?}"))),
    }
}

fn alex(input: &str, multivariable: bool, clasp: Clasp, json: bool) -> Result<(), Failure> {
    let pd = diagram(input, clasp)?;
    let mu = pd.num_components();
    let delta = if mu == 1 {
        knot_alexander(&pd).map_err(Failure::semantic)?
    } else {
        let d = link_alexander(&pd).map_err(Failure::semantic)?;
        if multivariable {
            d
        } else {
            single_variable(&d)
        }
    };
    let (centered, doubled) = delta.symmetric_form();
    let normalized = delta.normalize_units();
    if json {
        let v = json!({
            "input": input,
            "components": mu,
            "variables": delta.variables(),
            "centered": centered.to_string(),
            "exponents_doubled": doubled,
            "normalized": normalized.to_string(),
        });
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        println!("{centered}");
        println!("normalized: {normalized}");
        if doubled {
            println!("note: exponents doubled to reach a centered form");
        }
    }
    Ok(())
}

fn homology_cmd(input: &str, json: bool) -> Result<(), Failure> {
    let h = read_json::<HandleJson>(input)?.build().map_err(Failure::semantic)?;
    let r = homology(&h);
    let h2 = match r.h2_rank {
        0 => "0".to_string(),
        1 => "Z".to_string(),
        k => format!("Z^{k}"),
    };
    if json {
        let v = json!({
            "H1": r.h1.to_string(),
            "H2": h2,
            "H1_boundary": r.boundary_h1.to_string(),
            "h2_form": r.h2_form.to_rows(),
            "form": r.form,
        });
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        println!("H1={}", r.h1);
        println!("H2={h2}");
        println!("H1(boundary)={}", r.boundary_h1);
        println!("form: {}", r.form);
    }
    Ok(())
}

fn form_cmd(input: &str, compare: Option<&str>, json: bool) -> Result<(), Failure> {
    let g = read_json::<GramJson>(input)?.build().map_err(Failure::semantic)?;
    let inv = g.invariants();
    let other = compare
        .map(|c| read_json::<GramJson>(c)?.build().map_err(Failure::semantic))
        .transpose()?;
    let verdict = other
        .as_ref()
        .map(|o| forms_isomorphic(&g, o).map_err(Failure::semantic))
        .transpose()?;
    let verdict_text = verdict.as_ref().map(|v| match v {
        FormVerdict::Isomorphic { .. } => "isomorphic".to_string(),
        FormVerdict::NotIsomorphic(o) => format!("not isomorphic: {}", format!("{o:?}").to_lowercase()),
    });
    if json {
        let v = json!({
            "labels": g.labels(),
            "invariants": inv,
            "compare": other.as_ref().map(|o| o.invariants()),
            "verdict": verdict_text,
        });
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        println!("{inv}");
        if let (Some(o), Some(t)) = (&other, &verdict_text) {
            println!("other: {}", o.invariants());
            println!("{t}");
        }
    }
    Ok(())
}

fn sw_cmd(family: &str, scale: i64, clasp: Clasp, json: bool) -> Result<(), Failure> {
    let fam = parse_family(family)?.ok_or_else(|| Failure::Parse(format!("unknown family spec {family:?}")))?;
    let (name, n, sw, labels): (&str, i64, SWPolynomial, Vec<String>) = match fam {
        Family::TwistKnot(n) => ("E2_twist", n, e2_twist_sw(n, clasp).map_err(Failure::semantic)?, vec!["T".into()]),
        Family::TorusLink(k) => {
            if k % 2 != 0 {
                return Err(Failure::Semantic(format!("the link operation needs two components, got torus-link:2,{k}")));
            }
            let pd = torus_link_2_2n(k / 2).map_err(Failure::semantic)?;
            let delta = link_alexander(&pd).map_err(Failure::semantic)?;
            (
                "E1_link",
                k,
                link_operation_sw(&delta).map_err(Failure::semantic)?,
                vec!["T1".into(), "T2".into()],
            )
        }
        Family::Elliptic(n) => ("elliptic", n, elliptic_sw(n).map_err(Failure::semantic)?, vec!["S".into()]),
        _ => return Err(Failure::Semantic(format!("{family:?} is not a surgery family"))),
    };
    let sw = sw.with_scale(scale);
    if json {
        println!("{}", serde_json::to_string(&SWReport::new(name, n, &sw)).unwrap());
    } else {
        println!("sw: {}", sw.poly());
        let classes: Vec<String> = basic_classes(&sw).iter().map(|c| c.display_with(&labels)).collect();
        println!("basic classes: {}", classes.join(", "));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_specs() {
        assert!(matches!(parse_family("twist-knot:3"), Ok(Some(Family::TwistKnot(3)))));
        assert!(matches!(parse_family("torus-link:2,4"), Ok(Some(Family::TorusLink(4)))));
        assert!(matches!(parse_family("torus-link:3,4"), Err(Failure::Semantic(_))));
        assert!(matches!(parse_family("twist-knot:x"), Err(Failure::Parse(_))));
        assert!(matches!(parse_family("pretzel"), Ok(None)));
        assert!(matches!(diagram("twist-knot:0", Clasp::Standard), Err(Failure::Semantic(_))));
        assert_eq!(diagram("torus-link:2,3", Clasp::Standard).ok().map(|d| d.num_components()), Some(1));
    }
}
