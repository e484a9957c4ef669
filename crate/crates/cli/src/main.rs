use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use arf_core::format::{parse_naturals, to_dot, TreeDocument};
use arf_core::{
    brute_force_cond, check_arf, check_good_axioms, cond_numerical, cond_numerical_oracle,
    BoxSemigroup, ConductorVector, TreeEnumerator, TreeMatrix,
};

#[derive(Parser)]
#[command(
    name = "arf",
    version,
    about = "Enumerate Arf numerical semigroups and multiplicity trees of Arf good semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the multiplicity sequences of Arf numerical semigroups with conductor N.
    Numerical {
        n: u32,
        #[arg(long)]
        count: bool,
    },
    /// List the multiplicity trees with conductor vector C, e.g. `4,5`.
    Good {
        conductor: String,
        /// Include trees that are untwisted only after permuting branches.
        #[arg(long)]
        twisted: bool,
        #[arg(long)]
        count: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print tree counts over a range of conductors.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
        /// Largest component for `--dim 2`.
        #[arg(long, required_if_eq("dim", "2"))]
        max: Option<u32>,
        /// Conductor vectors for `--dim 3`.
        #[arg(long, num_args = 1.., required_if_eq("dim", "3"))]
        list: Vec<String>,
        #[arg(long)]
        twisted: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Cross-check enumerators against brute force and the semigroup axioms.
    Verify {
        /// A conductor vector, or a single integer for the numerical case.
        target: Option<String>,
        /// Compare both numerical enumerators for every conductor up to this bound.
        #[arg(long)]
        numerical_max: Option<u32>,
        /// Room left between the conductor and the truncation box.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        box_margin: u32,
    },
    /// Time the sweep enumerator against the recursive one.
    Bench {
        #[arg(long, default_value_t = 100)]
        max_n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

enum Failure {
    Usage(String),
    Verification,
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn conductor(arg: &str) -> Result<ConductorVector, Failure> {
    let parts = parse_naturals(arg).map_err(|e| Failure::Usage(e.to_string()))?;
    if parts.len() < 2 {
        return Err(Failure::Usage(format!(
            "{arg:?}: a conductor vector needs at least two components"
        )));
    }
    ConductorVector::new(parts).map_err(|e| Failure::Usage(format!("{arg:?}: {e}")))
}

fn numerical(out: &mut Out, n: u32, count: bool) -> Result<(), Failure> {
    let seqs = cond_numerical(n);
    if count {
        writeln!(out, "{}", seqs.len())?;
    } else {
        for m in seqs {
            writeln!(out, "{m}")?;
        }
    }
    Ok(())
}

fn good(out: &mut Out, c: &str, twisted: bool, count: bool, format: Format) -> Result<(), Failure> {
    let c = conductor(c)?;
    let e = TreeEnumerator::new();
    if twisted {
        let trees = e.cond_bar(&c);
        if count {
            writeln!(out, "{}", trees.len())?;
            return Ok(());
        }
        for (i, t) in trees.iter().enumerate() {
            write_matrix(out, t, i, format, || TreeDocument::from_matrix(t))?;
        }
    } else {
        let trees = e.cond(&c);
        if count {
            writeln!(out, "{}", trees.len())?;
            return Ok(());
        }
        for (i, t) in trees.iter().enumerate() {
            match format {
                Format::Text => writeln!(out, "{t}")?,
                _ => write_matrix(out, &t.matrix_form(), i, format, || {
                    TreeDocument::from_untwisted(t)
                })?,
            }
        }
    }
    Ok(())
}

fn write_matrix(
    out: &mut Out,
    t: &TreeMatrix,
    index: usize,
    format: Format,
    doc: impl FnOnce() -> TreeDocument,
) -> io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{t}"),
        Format::Json => writeln!(out, "{}", doc().to_json_line()),
        Format::Dot => write!(out, "{}", to_dot(t, &format!("T{}", index + 1))),
    }
}

fn table(
    out: &mut Out,
    dim: u8,
    max: Option<u32>,
    list: &[String],
    twisted: bool,
    csv: bool,
) -> Result<(), Failure> {
    let e = TreeEnumerator::new();
    let count = |c: &ConductorVector| {
        if twisted {
            e.cond_bar(c).len()
        } else {
            e.cond(c).len()
        }
    };
    if dim == 2 {
        let max = max
            .filter(|&m| m >= 1)
            .ok_or_else(|| Failure::Usage("--max must be at least 1".into()))?;
        let rows: Vec<Vec<usize>> = (1..=max)
            .map(|i| {
                (1..=max)
                    .map(|j| count(&ConductorVector::new(vec![i, j]).unwrap()))
                    .collect()
            })
            .collect();
        if csv {
            let header: Vec<String> = (1..=max).map(|j| j.to_string()).collect();
            writeln!(out, "c,{}", header.join(","))?;
            for (i, row) in rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                writeln!(out, "{},{}", i + 1, cells.join(","))?;
            }
        } else {
            let width = rows
                .iter()
                .flatten()
                .map(|n| n.to_string().len())
                .max()
                .unwrap_or(1)
                .max(max.to_string().len());
            write!(out, "{:>w$}", "", w = max.to_string().len())?;
            for j in 1..=max {
                write!(out, " {j:>width$}")?;
            }
            writeln!(out)?;
            for (i, row) in rows.iter().enumerate() {
                write!(out, "{:>w$}", i + 1, w = max.to_string().len())?;
                for n in row {
                    write!(out, " {n:>width$}")?;
                }
                writeln!(out)?;
            }
        }
        return Ok(());
    }
    let conductors = list
        .iter()
        .map(|s| conductor(s))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(c) = conductors.iter().find(|c| c.dim() != 3) {
        return Err(Failure::Usage(format!("{c} is not in N^3")));
    }
    if csv {
        writeln!(out, "conductor,count")?;
    }
    let width = conductors
        .iter()
        .map(|c| c.to_string().len())
        .max()
        .unwrap_or(0);
    for c in &conductors {
        let n = count(c);
        if csv {
            let parts: Vec<String> = c.as_slice().iter().map(u32::to_string).collect();
            writeln!(out, "{},{n}", parts.join(";"))?;
        } else if conductors.len() == 1 {
            writeln!(out, "{n}")?;
        } else {
            writeln!(out, "{:<width$}  {n}", c.to_string())?;
        }
    }
    Ok(())
}

fn report(out: &mut Out, ok: bool, what: &str, detail: &str) -> io::Result<bool> {
    writeln!(out, "{} {what}: {detail}", if ok { "PASS" } else { "FAIL" })?;
    Ok(ok)
}

fn verify_numerical_range(out: &mut Out, max: u32) -> io::Result<bool> {
    let bad = (0..=max).find(|&n| cond_numerical(n) != cond_numerical_oracle(n));
    match bad {
        None => report(
            out,
            true,
            "numerical enumerators",
            &format!("agree for n <= {max}"),
        ),
        Some(n) => report(
            out,
            false,
            "numerical enumerators",
            &format!("differ at n = {n}"),
        ),
    }
}

fn verify_numerical(out: &mut Out, n: u32, margin: u32) -> io::Result<bool> {
    let seqs = cond_numerical(n);
    let mut ok = report(
        out,
        seqs == cond_numerical_oracle(n),
        "numerical enumerators",
        &format!("{} sequences for n = {n}", seqs.len()),
    )?;
    let bound = n + margin;
    for m in &seqs {
        let members: Vec<[u32; 1]> = (0..=bound)
            .filter(|&x| m.contains(x))
            .map(|x| [x])
            .collect();
        let s = BoxSemigroup::from_elements(vec![bound], members.iter().map(|x| x.as_slice()));
        let arf = check_arf(&s, margin);
        if let Some(line) = arf.first_violation() {
            ok &= report(out, false, &m.to_string(), &line.to_string())?;
        }
        if s.conductor() != Some(vec![n]) {
            ok &= report(
                out,
                false,
                &m.to_string(),
                &format!("conductor {:?}", s.conductor()),
            )?;
        }
    }
    if ok {
        report(
            out,
            true,
            "arf",
            &format!("{} semigroups checked", seqs.len()),
        )?;
    }
    Ok(ok)
}

fn verify_trees(out: &mut Out, c: &ConductorVector, margin: u32) -> io::Result<bool> {
    let e = TreeEnumerator::new();
    let trees = e.cond(c);
    let brute = brute_force_cond(c);
    let mut ok = report(
        out,
        brute.as_slice() == &*trees,
        "brute force",
        &format!(
            "{} trees enumerated, {} found by exhaustive search",
            trees.len(),
            brute.len()
        ),
    )?;
    let bound: Vec<u32> = c.as_slice().iter().map(|&x| x + margin).collect();
    let all = e.cond_bar(c);
    let mut checked = 0;
    for t in &all {
        let s = match t.expand_semigroup_in_box(&bound) {
            Ok(s) => s,
            Err(err) => {
                ok &= report(out, false, &t.to_string(), &err.to_string())?;
                continue;
            }
        };
        for r in [check_good_axioms(&s, margin), check_arf(&s, margin)] {
            if let Some(line) = r.first_violation() {
                ok &= report(out, false, &t.to_string(), &line.to_string())?;
            }
        }
        if s.conductor().as_deref() != Some(c.as_slice()) {
            ok &= report(
                out,
                false,
                &t.to_string(),
                &format!("recovered conductor {:?}", s.conductor()),
            )?;
        }
        checked += 1;
    }
    let twisted = all.len() - trees.len();
    if ok {
        report(
            out,
            true,
            "axioms",
            &format!(
                "{} trees checked ({} untwisted, {twisted} twisted)",
                checked,
                trees.len()
            ),
        )?;
    }
    Ok(ok)
}

fn verify(
    out: &mut Out,
    target: Option<&str>,
    numerical_max: Option<u32>,
    margin: u32,
) -> Result<(), Failure> {
    if target.is_none() && numerical_max.is_none() {
        return Err(Failure::Usage(
            "verify needs a target or --numerical-max".into(),
        ));
    }
    let mut ok = true;
    if let Some(max) = numerical_max {
        ok &= verify_numerical_range(out, max)?;
    }
    if let Some(target) = target {
        let parts = parse_naturals(target).map_err(|e| Failure::Usage(e.to_string()))?;
        if parts.len() == 1 {
            ok &= verify_numerical(out, parts[0], margin)?;
        } else {
            ok &= verify_trees(out, &conductor(target)?, margin)?;
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn bench(out: &mut Out, max_n: u32) -> Result<(), Failure> {
    writeln!(
        out,
        "{:>5} {:>10} {:>12} {:>12}",
        "n", "count", "sweep", "recursive"
    )?;
    let (mut sweep_total, mut rec_total) = (Duration::ZERO, Duration::ZERO);
    let mut ok = true;
    for n in 0..=max_n {
        let t = Instant::now();
        let fast = cond_numerical(n);
        let sweep = t.elapsed();
        let t = Instant::now();
        let slow = cond_numerical_oracle(n);
        let rec = t.elapsed();
        sweep_total += sweep;
        rec_total += rec;
        if fast != slow {
            ok = false;
            writeln!(
                out,
                "{n:>5} MISMATCH: {} vs {} sequences",
                fast.len(),
                slow.len()
            )?;
        } else if n % 10 == 0 || n == max_n {
            writeln!(
                out,
                "{n:>5} {:>10} {:>12.2?} {:>12.2?}",
                fast.len(),
                sweep,
                rec
            )?;
        }
    }
    writeln!(
        out,
        "total {:>10} {:>12.2?} {:>12.2?}",
        "", sweep_total, rec_total
    )?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = match &cli.command {
        Command::Numerical { n, count } => numerical(&mut out, *n, *count),
        Command::Good {
            conductor,
            twisted,
            count,
            format,
        } => good(&mut out, conductor, *twisted, *count, *format),
        Command::Table {
            dim,
            max,
            list,
            twisted,
            csv,
        } => table(&mut out, *dim, *max, list, *twisted, *csv),
        Command::Verify {
            target,
            numerical_max,
            box_margin,
        } => verify(&mut out, target.as_deref(), *numerical_max, *box_margin),
        Command::Bench { max_n } => bench(&mut out, *max_n),
    };
    let flushed = out.flush();
    match result.and(flushed.map_err(Failure::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
