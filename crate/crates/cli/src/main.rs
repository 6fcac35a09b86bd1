//! `ellentuck`: command-line access to finite truncations of E_k.
//!
//! Exit status: 0 success, 1 validation or logic failure, 2 usage error,
//! 3 exhausted data or budget.

mod input;

use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ellentuck::constructions::{certify_fusion, construct_in_basic_set, dense_embed, fuse_a3b, NodeSet};
use ellentuck::ramsey::{
    canonize_1ext, canonize_arn, front_cover_check, inner_check, irreducible_check, nash_williams_check, pigeonhole,
    Cover,
};
use ellentuck::{
    build_w, classify_n, enumerate_k, enumerate_le_k, extension_nodes, from_dot, project, to_dot, Error, FiniteApprox,
};

use input::Usage;

#[derive(Parser)]
#[command(name = "ellentuck", version, about = "Finite truncations of the Ellentuck spaces E_k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// List the first members of ω^{↓≤k} under ≺.
    Enum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count: usize,
        /// Only sequences of length k.
        #[arg(long)]
        full_length_only: bool,
    },
    /// Print r_n(W_k).
    BuildW {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nodes: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check the conditions on a finite approximation.
    Validate {
        #[arg(long)]
        file: String,
        /// Defaults to dot for `.dot` files, json otherwise.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// The l with n ∈ N^k_l.
    ClassifyN {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// π_l of a node.
    Project {
        #[arg(long)]
        node: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// The 1-extensions of an approximation inside a member.
    Extensions {
        #[arg(long)]
        approx: String,
        #[arg(long)]
        member: String,
    },
    /// A member of [a, A] of the given length.
    Construct {
        #[arg(long)]
        a: String,
        #[arg(long)]
        member: String,
        #[arg(long)]
        len: usize,
    },
    /// A' ∈ [depth_B(a), B] with [a, A'] ⊆ [a, A].
    Fuse {
        #[arg(long)]
        a: String,
        #[arg(long = "A")]
        big_a: String,
        #[arg(long = "B")]
        big_b: String,
        #[arg(long)]
        len: usize,
    },
    /// An approximation using only the nodes of an oracle file.
    Embed {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        len: usize,
    },
    /// Y ∈ [a, X] on whose 1-extensions of a the coloring is constant.
    Pigeonhole {
        #[arg(long)]
        a: String,
        #[arg(long)]
        member: String,
        /// A coloring file, or random:<m> together with --seed.
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Y ∈ [s, X] on which the coloring of 1-extensions of s is canonical.
    CanonizeExt {
        #[arg(long)]
        s: String,
        #[arg(long)]
        member: String,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// A projection vector inducing a relation on AR_n.
    CanonizeArn {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// A relation file, or vector:<l_0,…> for the relation a vector induces.
        #[arg(long)]
        relation: String,
        #[arg(long)]
        member: String,
        #[arg(long)]
        len: usize,
    },
    /// Nash-Williams property and coverage of a family inside a member.
    CheckFront {
        #[arg(long)]
        family: String,
        #[arg(long)]
        member: String,
    },
    /// Whether a map is inner and irreducible on a family.
    CheckIrreducible {
        #[arg(long)]
        map: String,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

/// What a subcommand printed and how it ended.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }

    fn fail(stdout: String) -> Self {
        Outcome { stdout, code: 1 }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize")
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        anyhow::bail!(Usage("invalid value for --k: must be positive".into()));
    }
    Ok(())
}

fn run(command: Command) -> Result<Outcome> {
    let out = match command {
        Command::Enum { k, count, full_length_only } => {
            check_k(k)?;
            let seqs = if full_length_only { enumerate_k(k, count) } else { enumerate_le_k(k, count) };
            let parts: Vec<String> = seqs.iter().map(ToString::to_string).collect();
            Outcome::ok(parts.join("≺"))
        }
        Command::BuildW { k, nodes, format } => {
            check_k(k)?;
            let w = build_w(k, nodes);
            match format {
                Format::Json => Outcome::ok(to_json(&w.approx)),
                Format::Dot => Outcome::ok(to_dot(&w.approx).trim_end().to_string()),
            }
        }
        Command::Validate { file, format } => {
            let text = input::read_file("file", &file)?;
            let format = format.unwrap_or(if file.ends_with(".dot") { Format::Dot } else { Format::Json });
            let a: FiniteApprox = match format {
                Format::Json => input::approx("file", &text, None)?,
                Format::Dot => from_dot(&text).map_err(|e| Usage(format!("invalid value for --file: {e}")))?,
            };
            match a.validate() {
                Ok(()) => Outcome::ok(format!("valid: {} nodes", a.len())),
                Err(v) => Outcome::fail(format!("INVALID: {v}")),
            }
        }
        Command::ClassifyN { k, n } => {
            check_k(k)?;
            Outcome::ok(to_json(&classify_n(k, n)))
        }
        Command::Project { node, level, k } => {
            check_k(k)?;
            let node = input::node("node", &node, k)?;
            Outcome::ok(project(&node, level)?.to_string())
        }
        Command::Extensions { approx, member } => {
            let x = input::member("member", &member)?;
            let a = input::approx("approx", &approx, Some(x.k()))?;
            let nodes: Vec<Vec<u64>> = extension_nodes(&a, &x).iter().map(|n| n.indices().to_vec()).collect();
            Outcome::ok(to_json(&nodes))
        }
        Command::Construct { a, member, len } => {
            let x = input::member("member", &member)?;
            let a = input::approx("a", &a, Some(x.k()))?;
            Outcome::ok(to_json(&construct_in_basic_set(&a, &x, len)?))
        }
        Command::Fuse { a, big_a, big_b, len } => {
            let am = input::member("A", &big_a)?;
            let bm = input::member("B", &big_b)?;
            let a = input::approx("a", &a, Some(am.k()))?;
            let fusion = fuse_a3b(&a, &am, &bm, len)?;
            match certify_fusion(&a, &am, &fusion.member, &mut input::budget()?)? {
                None => Outcome::ok(to_json(&fusion)),
                Some(bad) => Outcome::fail(format!("{}\nleaves A at {bad}", to_json(&fusion))),
            }
        }
        Command::Embed { k, oracle, len } => {
            check_k(k)?;
            let set = NodeSet::new(k, input::nodes("oracle", &oracle, k)?);
            Outcome::ok(to_json(&dense_embed(&set, len)?))
        }
        Command::Pigeonhole { a, member, coloring, len, seed } => {
            let x = input::member("member", &member)?;
            let a = input::approx("a", &a, Some(x.k()))?;
            let c = input::coloring("coloring", &coloring, x.k(), &a, &x, seed)?;
            Outcome::ok(to_json(&pigeonhole(&a, &x, &c, len, &mut input::budget()?)?))
        }
        Command::CanonizeExt { s, member, coloring, len, seed } => {
            let x = input::member("member", &member)?;
            let s = input::approx("s", &s, Some(x.k()))?;
            let c = input::coloring("coloring", &coloring, x.k(), &s, &x, seed)?;
            Outcome::ok(to_json(&canonize_1ext(&s, &x, &c, len, &mut input::budget()?)?))
        }
        Command::CanonizeArn { k, n, relation, member, len } => {
            check_k(k)?;
            let x = input::member("member", &member)?;
            let mut budget = input::budget()?;
            let r = input::relation("relation", &relation, k, n, &x, &mut budget)?;
            Outcome::ok(to_json(&canonize_arn(&r, k, n, &x, len, &mut budget)?))
        }
        Command::CheckFront { family, member } => {
            let x = input::member("member", &member)?;
            let f = input::family("family", &family, x.k())?;
            let nw = nash_williams_check(&f);
            let cover = front_cover_check(&f, &x, &mut input::budget()?)?;
            let covered = cover == Cover::Covered;
            let report = serde_json::json!({ "nash_williams": nw, "cover": cover });
            if nw && covered {
                Outcome::ok(report.to_string())
            } else {
                Outcome::fail(report.to_string())
            }
        }
        Command::CheckIrreducible { map, family, k } => {
            check_k(k)?;
            let phi = input::inner_map("map", &map)?;
            let f = input::family("family", &family, k)?;
            let inner = inner_check(&phi, &f, k);
            let irreducible = irreducible_check(&phi, &f, k);
            let report = serde_json::json!({ "inner": inner, "irreducible": irreducible });
            if irreducible {
                Outcome::ok(report.to_string())
            } else {
                Outcome::fail(report.to_string())
            }
        }
    };
    Ok(out)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_exhaustion() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            println!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
