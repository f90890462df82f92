//! Command-line front end for `jlcalc`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::diagrams::json::{combination_from_json, combination_to_json};
use crate::diagrams::{eta, eta_inverse, Combination, DiagramVector};
use crate::error::Error;
use crate::exactla::IntMatrix;
use crate::freegroup::{lcs_class, magnus, Alphabet, Endo, TruncatedSeries, Word};
use crate::freelie::quasi::quasi_lie;
use crate::freelie::{default_names, dk_basis, DkElement};
use crate::johnson::{milnor_mu, parse_longitudes, sp_classify, tau_k, tau_k_levine, SpClassification, Tau};
use crate::tsa::{
    classify_cobordism, color_names, compose, diagrammatic_tau_levine, plus_names, upper_tree_part, LinkingMatrix, Series,
    TsMorphism,
};
use crate::verify::run_suite;

const MAX_RANK: usize = 12;
const MAX_GENUS: usize = 6;
const MAX_DEGREE: usize = 5;
const MAX_CAP: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "jlcalc", version, about = "Exact calculus for Johnson and Johnson-Levine homomorphisms")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct WordArg {
    /// Whitespace-separated letters such as `a1 b2^-1`.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    /// Genus of the surface alphabet; inferred from the word when omitted.
    #[arg(long)]
    genus: Option<usize>,
}

#[derive(Args, Debug)]
struct MapArgs {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    degree: usize,
    /// JSON file `{"genus": g, "images": {"b1": "b1 a1"}}`.
    #[arg(long)]
    map: PathBuf,
}

#[derive(Args, Debug)]
struct Colors {
    /// Rank of `H`, colors `x1..xn`.
    #[arg(long, conflicts_with = "genus")]
    n: Option<usize>,
    /// Genus, colors `a1..ag, b1..bg`.
    #[arg(long)]
    genus: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Freely reduce a word.
    Reduce(WordArg),
    /// Magnus expansion truncated above a degree.
    Magnus {
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 2)]
        cap: usize,
    },
    /// Largest k ≤ cap with the word in the k-th lower central series term.
    Lcs {
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 6)]
        cap: usize,
    },
    /// Johnson homomorphism of a map of the surface group.
    Tau(MapArgs),
    /// Johnson-Levine homomorphism of a map of the surface group.
    TauLevine(MapArgs),
    /// Symplectic and Lagrangian classification of a 2g×2g matrix.
    SpClassify {
        /// JSON array of rows (integers or decimal strings).
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Milnor invariant of longitudes.
    Milnor {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        degree: usize,
        /// JSON array of longitude words in `u1..ul`.
        #[arg(long)]
        longitudes: PathBuf,
    },
    /// Rank of the kernel of the bracket map `H ⊗ L_{k+1} → L_{k+2}`.
    DkRank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Tree diagrams to tensors.
    Eta {
        #[command(flatten)]
        colors: Colors,
        file: PathBuf,
    },
    /// Tensors to tree diagrams over the rationals.
    EtaInverse {
        #[command(flatten)]
        colors: Colors,
        file: PathBuf,
    },
    /// Invariant factors of the degree-k quasi-Lie module.
    QuasiLie {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// LC / ILC / IC classification of a linking matrix.
    ClassifyLk { file: PathBuf },
    /// The strut part `[Lk/2]` of a linking matrix as a morphism.
    StrutPart {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        cap: usize,
    },
    /// Composite `left ∘ right` of two morphisms.
    Compose {
        #[arg(long, default_value_t = 4)]
        cap: usize,
        left: PathBuf,
        right: PathBuf,
    },
    /// Upper-tree reduction of a morphism or a bare series.
    UpperTree {
        file: PathBuf,
        /// Genus used to name colors of a bare series.
        #[arg(long, default_value_t = 3)]
        genus: usize,
    },
    /// `η⁻¹ ∘ τ^L_k` with colors `j+`.
    TauLevineDiagram {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        degree: usize,
        map: PathBuf,
    },
    /// Run the property suite.
    Verify {
        /// `all` or a comma-separated list of check names.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Exit code and the text destined for standard output and standard error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// A result with its JSON form and text rendering.
struct Rendered {
    json: Value,
    text: String,
    ok: bool,
}

impl Rendered {
    fn new(json: Value, text: String) -> Self {
        Rendered { json, text, ok: true }
    }
}

pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Output { code, stdout: text, stderr: String::new() } } else { Output { code, stdout: String::new(), stderr: text } };
        }
    };
    match execute(&cli.command) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&r.json).expect("serializable")),
                Format::Text => r.text,
            };
            Output { code: if r.ok { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(Failure::Usage(m)) => Output { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Domain(e)) => {
            let stdout = match cli.format {
                Format::Json => format!("{}\n", json!({"error": e.to_string()})),
                Format::Text => String::new(),
            };
            Output { code: 1, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn ceiling(flag: &str, value: usize, max: usize) -> Run<()> {
    if value > max {
        return Err(Failure::Usage(format!("--{flag} {value} exceeds the ceiling {max}")));
    }
    Ok(())
}

fn read_json(path: &Path) -> Run<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(Error::Parse(format!("{}: {e}", path.display()))))
}

fn alphabet_for(w: &WordArg) -> Run<Alphabet> {
    match w.genus {
        Some(g) => {
            ceiling("genus", g, MAX_GENUS)?;
            Ok(Alphabet::surface(g))
        }
        None => Ok(Alphabet::infer(&w.word)?),
    }
}

fn names_for(c: &Colors) -> Run<(usize, Vec<String>)> {
    match (c.n, c.genus) {
        (Some(n), _) => {
            ceiling("n", n, MAX_RANK)?;
            Ok((n, default_names(n)))
        }
        (None, Some(g)) => {
            ceiling("genus", g, MAX_GENUS)?;
            let a = Alphabet::surface(g);
            Ok((2 * g, (0..2 * g).map(|i| a.name(i)).collect()))
        }
        (None, None) => Err(Failure::Usage("one of --n or --genus is required".into())),
    }
}

fn read_map(args: &MapArgs) -> Run<Endo> {
    ceiling("genus", args.genus, MAX_GENUS)?;
    ceiling("degree", args.degree, MAX_DEGREE)?;
    let h = Endo::from_json(&read_json(&args.map)?)?;
    if h.alphabet.size != args.genus {
        return Err(Failure::Domain(Error::AlphabetMismatch(format!("map has genus {}, --genus is {}", h.alphabet.size, args.genus))));
    }
    Ok(h)
}

fn int_of(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn read_matrix(path: &Path) -> Run<IntMatrix> {
    let v = read_json(path)?;
    let bad = || Failure::Domain(Error::Parse("matrix must be an array of rows of integers".into()));
    let rows = v.as_array().ok_or_else(bad)?;
    let rows: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.as_array().ok_or_else(bad)?.iter().map(|x| int_of(x).ok_or_else(bad)).collect()).collect::<Run<_>>()?;
    Ok(IntMatrix::from_rows(rows)?)
}

fn rational_text(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn signed_terms(terms: impl IntoIterator<Item = (BigRational, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let neg = c.is_negative();
        let a = c.abs();
        let coeff = if a.is_one() && !body.is_empty() { String::new() } else { rational_text(&a) };
        let sep = if body.is_empty() || coeff.is_empty() { "" } else { "·" };
        match (out.is_empty(), neg) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        write!(out, "{coeff}{sep}{body}").expect("string write");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn series_text(s: &TruncatedSeries, a: &Alphabet) -> String {
    let terms = s.terms().into_iter().map(|(m, c)| {
        let mono: Vec<String> = m.iter().map(|&i| a.series_name(i)).collect();
        (BigRational::from_integer(c), mono.join(""))
    });
    signed_terms(terms)
}

fn dk_text(x: &DkElement, names: &[String]) -> String {
    let terms = x.terms().into_iter().map(|(h, w, c)| {
        let word: String = w.iter().map(|&i| names[i as usize].as_str()).collect::<Vec<_>>().join(",");
        (c, format!("{}⊗ℓ({word})", names[h]))
    });
    signed_terms(terms)
}

fn combination_text(x: &Combination, names: &[String]) -> String {
    let terms = x.iter().map(|(d, c)| {
        let legs: Vec<&str> = d.legs().map(|(_, col)| names[col as usize].as_str()).collect();
        let body = if d.verts.is_empty() && d.circles == 0 {
            "∅".to_string()
        } else {
            let loops = if d.has_loop() { ", looped" } else { "" };
            format!("D[ideg {}; {}{loops}]", d.ideg(), legs.join(" "))
        };
        (c.clone(), body)
    });
    signed_terms(terms)
}

fn tau_rendered(t: &Tau, names: &[String]) -> Rendered {
    Rendered::new(
        json!({"value": t.value.to_json(names), "boundary_fixed": t.boundary_fixed, "in_dk": t.value.bracket_vanishes()}),
        format!("{}\nboundary fixed: {}\n", dk_text(&t.value, names), t.boundary_fixed),
    )
}

fn vector_rendered(v: &DiagramVector, names: &[String]) -> Rendered {
    let comb = v.to_combination();
    Rendered::new(combination_to_json(&comb, names), format!("{}\n", combination_text(&comb, names)))
}

fn morphism_rendered(m: &TsMorphism) -> Rendered {
    let names = m.names();
    let mut text = format!("{} → {}, cap {}\n", m.source, m.target, m.cap);
    for (r, c, x) in m.strut_generator() {
        writeln!(text, "strut {} {}: {}", names[r as usize], names[c as usize], rational_text(&x)).expect("string write");
    }
    writeln!(text, "{}", combination_text(&m.y.to_combination(), &names)).expect("string write");
    Rendered::new(m.to_json(), text)
}

fn matrix_text(m: &IntMatrix) -> String {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).collect::<Vec<_>>().join("; ")
}

fn sp_rendered(s: &SpClassification) -> Rendered {
    let blocks = s.blocks.as_ref().map(|(p, q, r)| json!({"P": p, "Q": q, "R": r}));
    let mut text = format!("symplectic: {}\nLagrangian: {}\nstrongly Lagrangian: {}\n", s.is_sp, s.is_lagrangian, s.is_strongly_lagrangian);
    if let Some((p, q, r)) = &s.blocks {
        writeln!(text, "P = [{}]\nQ = [{}]\nR = [{}]", matrix_text(p), matrix_text(q), matrix_text(r)).expect("string write");
    }
    Rendered::new(
        json!({"symplectic": s.is_sp, "lagrangian": s.is_lagrangian, "strongly_lagrangian": s.is_strongly_lagrangian, "blocks": blocks}),
        text,
    )
}

fn execute(cmd: &Command) -> Run<Rendered> {
    match cmd {
        Command::Reduce(w) => {
            let a = alphabet_for(w)?;
            let word = Word::parse(&a, &w.word)?;
            let s = word.display(&a).to_string();
            Ok(Rendered::new(json!({"word": s, "length": word.len()}), format!("{s}\n")))
        }
        Command::Magnus { word, cap } => {
            ceiling("cap", *cap, MAX_CAP)?;
            if *cap == 0 {
                return Err(Failure::Usage("--cap must be at least 1".into()));
            }
            let a = alphabet_for(word)?;
            let w = Word::parse(&a, &word.word)?;
            let s = magnus(a.rank(), &w, *cap);
            Ok(Rendered::new(s.to_json(&a), format!("{}\n", series_text(&s, &a))))
        }
        Command::Lcs { word, cap } => {
            ceiling("cap", *cap, MAX_CAP)?;
            let a = alphabet_for(word)?;
            let w = Word::parse(&a, &word.word)?;
            let c = lcs_class(a.rank(), &w, *cap);
            Ok(Rendered::new(json!({"class": c.to_string()}), format!("{c}\n")))
        }
        Command::Tau(args) => {
            let h = read_map(args)?;
            let a = h.alphabet;
            let names: Vec<String> = (0..a.rank()).map(|i| a.name(i)).collect();
            Ok(tau_rendered(&tau_k(&h, args.degree)?, &names))
        }
        Command::TauLevine(args) => {
            let h = read_map(args)?;
            let t = Alphabet::handlebody(args.genus);
            let names: Vec<String> = (0..t.rank()).map(|i| t.name(i)).collect();
            Ok(tau_rendered(&tau_k_levine(&h, args.degree)?, &names))
        }
        Command::SpClassify { matrix } => Ok(sp_rendered(&sp_classify(&read_matrix(matrix)?)?)),
        Command::Milnor { strands, degree, longitudes } => {
            ceiling("strands", *strands, MAX_RANK)?;
            ceiling("degree", *degree, MAX_DEGREE + 1)?;
            let v = read_json(longitudes)?;
            let words: Vec<String> = v
                .as_array()
                .ok_or_else(|| Failure::Domain(Error::Parse("longitudes must be an array of words".into())))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Failure::Domain(Error::Parse("longitudes must be strings".into()))))
                .collect::<Run<_>>()?;
            let m = milnor_mu(*strands, *degree, &parse_longitudes(*strands, &words)?)?;
            let a = Alphabet::disk(*strands);
            let names: Vec<String> = (0..*strands).map(|i| a.name(i)).collect();
            Ok(Rendered::new(
                json!({"value": m.value.to_json(&names), "bracket_vanishes": m.bracket_vanishes}),
                format!("{}\nbracket vanishes: {}\n", dk_text(&m.value, &names), m.bracket_vanishes),
            ))
        }
        Command::DkRank { n, k } => {
            ceiling("n", *n, MAX_RANK)?;
            ceiling("k", *k, MAX_DEGREE)?;
            let r = dk_basis(*n, *k).rank();
            Ok(Rendered::new(json!({"n": n, "k": k, "rank": r}), format!("{r}\n")))
        }
        Command::Eta { colors, file } => {
            let (n, names) = names_for(colors)?;
            let comb = combination_from_json(&read_json(file)?, &names)?;
            let k = comb.iter().map(|(d, _)| d.ideg()).next().unwrap_or(1);
            if comb.iter().any(|(d, _)| d.ideg() != k || !d.is_connected_tree()) {
                return Err(Failure::Domain(Error::DegreeMismatch("eta takes trees of a single i-degree".into())));
            }
            let x = eta(n, k, &comb);
            Ok(Rendered::new(x.to_json(&names), format!("{}\n", dk_text(&x, &names))))
        }
        Command::EtaInverse { colors, file } => {
            let (_, names) = names_for(colors)?;
            let x = DkElement::from_json(&read_json(file)?, &names)?;
            Ok(vector_rendered(&eta_inverse(&x)?, &names))
        }
        Command::QuasiLie { n, k } => {
            ceiling("n", *n, MAX_RANK)?;
            ceiling("k", *k, MAX_DEGREE + 1)?;
            let q = quasi_lie(*n, *k);
            let torsion: Vec<String> = q.torsion().iter().map(ToString::to_string).collect();
            Ok(Rendered::new(
                json!({"n": n, "k": k, "free_rank": q.free_rank(), "torsion": torsion}),
                format!("free rank {}, torsion [{}]\n", q.free_rank(), torsion.join(", ")),
            ))
        }
        Command::ClassifyLk { file } => {
            let c = classify_cobordism(&LinkingMatrix::from_json(&read_json(file)?)?)?;
            Ok(Rendered::new(c.to_json(), format!("{}\n", c.verdict)))
        }
        Command::StrutPart { file, cap } => {
            ceiling("cap", *cap, MAX_CAP)?;
            Ok(morphism_rendered(&TsMorphism::from_linking(&LinkingMatrix::from_json(&read_json(file)?)?, *cap)?))
        }
        Command::Compose { cap, left, right } => {
            ceiling("cap", *cap, MAX_CAP)?;
            let d = TsMorphism::from_json(&read_json(left)?)?;
            let e = TsMorphism::from_json(&read_json(right)?)?;
            Ok(morphism_rendered(&compose(&d, &e, *cap)?))
        }
        Command::UpperTree { file, genus } => {
            ceiling("genus", *genus, MAX_GENUS)?;
            let v = read_json(file)?;
            let (y, names) = if v.get("source").is_some() {
                let m = TsMorphism::from_json(&v)?;
                let names = m.names();
                (m.y, names)
            } else {
                let names = color_names(*genus);
                (Series::from_json(&v, &names)?, names)
            };
            let u = upper_tree_part(&y);
            Ok(Rendered::new(u.to_json(&names), format!("{}\n", combination_text(&u.to_combination(), &names))))
        }
        Command::TauLevineDiagram { genus, degree, map } => {
            let h = read_map(&MapArgs { genus: *genus, degree: *degree, map: map.clone() })?;
            Ok(vector_rendered(&diagrammatic_tau_levine(&h, *degree)?, &plus_names(*genus)))
        }
        Command::Verify { suite, seed } => {
            let report = run_suite(suite, *seed).map_err(|e| Failure::Usage(format!("--suite: {e}")))?;
            Ok(Rendered { json: report.to_json(), text: report.to_text(), ok: report.all_passed() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jl(args: &[&str]) -> Output {
        run(std::iter::once("jlcalc").chain(args.iter().copied()))
    }

    #[test]
    fn word_commands() {
        assert_eq!(jl(&["reduce", "--word", "a1 b1 b1^-1 a1"]).stdout, "a1 a1\n");
        assert_eq!(jl(&["reduce", "--word", ""]).stdout, "\n");
        assert_eq!(jl(&["lcs", "--word", "a1"]).stdout, "1\n");
        assert_eq!(jl(&["lcs", "--word", "a1 a1 b1 a1^-1 b1^-1 a1^-1 b1 a1 b1^-1 a1^-1", "--cap", "4"]).stdout, "3\n");
        assert_eq!(jl(&["magnus", "--word", "a1^-1"]).stdout, "1 - X1 + X1X1\n");
    }

    #[test]
    fn dk_rank_example() {
        let out = jl(&["dk-rank", "--n", "4", "--k", "1"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "4\n"));
        let out = jl(&["--format", "json", "dk-rank", "--n", "4", "--k", "1"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["rank"], 4);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(jl(&["no-such-command"]).code, 2);
        assert_eq!(jl(&["dk-rank", "--n", "4"]).code, 2);
        let out = jl(&["dk-rank", "--n", "40", "--k", "1"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("--n"));
        assert_eq!(jl(&["reduce", "--word", "z1"]).code, 1);
        assert_eq!(jl(&["--help"]).code, 0);
    }

    #[test]
    fn zero_is_printed() {
        assert_eq!(signed_terms(Vec::new()), "0");
        assert_eq!(signed_terms(vec![(BigRational::one(), String::new())]), "1");
        assert_eq!(signed_terms(vec![(-BigRational::one(), "x".into())]), "-x");
    }
}
