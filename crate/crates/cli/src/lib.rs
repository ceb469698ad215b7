//! Report generation behind the `vftk` binary.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use vftk_core::budget::Budget;
use vftk_core::codes::{classify_markings, code_automorphisms, hamming_code, marking_count, BinaryCode};
use vftk_core::error::Error;
use vftk_core::f2quad::{census_total, hyperbolic_space, nonsingular_count_formula, orbit_census, sigma_total_formula};
use vftk_core::frame::{
    agl_order, classify_e8_frames_with, e8_table_frames, frame_group_order, gc_order, gcapn_invariants_with,
    gl2_order, order_sym_wr_agl, type_string, LatticeFrame, WEYL_E8_ORDER,
};
use vftk_core::hat::{
    all_lifts, basis_samples, involution_class, is_hat_homomorphism, is_kernel_element, miyamoto_involutions,
    wtilde_frame_stabilizer, HatGroup,
};
use vftk_core::io::{parse_code, parse_frame, parse_gram};
use vftk_core::lattice::{e8_code_lattice, IntegralLattice};
use vftk_core::unimodular::{
    dirichlet_prime, hyperbolic_unimodularize, lattice_automorphisms, preg4_twist, signature,
    strong_extension_check, unimodularize, Unimodularization,
};

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A published value.
    Published,
    /// Computed independently (formula or second algorithm).
    Derived,
    /// Holds by construction.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub basis: Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(command: &str, inputs: Value) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            inputs,
            results: json!({}),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, expected: impl Display, actual: impl Display, basis: Basis) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        self.checks.push(Check {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
            basis,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "vftk", version, about = "Lattice frame, glue code and unimodularization reports")]
pub struct Cli {
    /// Write compact JSON instead of pretty-printed JSON.
    #[arg(long, global = true)]
    pub compact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Definite,
    Hyperbolic,
    PrimePower,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame table, stabilizer structure and census of E8 frames.
    E8Frames {
        /// Frames per class whose stabilizers are recomputed.
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Invariants of a frame in an even lattice.
    FrameInvariants {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        frame: PathBuf,
    },
    /// Orbits of markings under the automorphism group of a code.
    Markings {
        /// `h8`, `h16`, or a code file.
        #[arg(long)]
        code: String,
    },
    /// Orders of the frame stabilizer for a given `k`.
    StabilizerOrders {
        #[arg(long)]
        k: usize,
    },
    /// Miyamoto involutions and their classes for a given `k`.
    Miyamoto {
        #[arg(long)]
        k: usize,
    },
    /// Even unimodular overlattice containing copies of the input.
    Unimodularize {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Definite)]
        mode: Mode,
        /// Lower bound for the prime in `prime-power` mode.
        #[arg(long, default_value_t = 2)]
        min_prime: i64,
    },
    /// Parabolic orbits on the isotropic subspaces of an F2 quadratic space.
    F2quad {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Relations of the central extension of an even lattice.
    HatVerify {
        #[arg(long)]
        gram: PathBuf,
    },
}

/// Failure before a report could be produced.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded => EXIT_BUDGET,
            Error::Parse { .. }
            | Error::Dimension(_)
            | Error::Singular
            | Error::NotEven
            | Error::NotIntegral
            | Error::Indefinite
            | Error::InvalidFrame(_)
            | Error::NotInLattice(_)
            | Error::OutOfRange { .. }
            | Error::UnsupportedLength(_)
            | Error::Congruence { .. }
            | Error::TooLarge(_) => EXIT_INPUT,
            _ => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn read_gram(path: &Path) -> Result<IntegralLattice, Failure> {
    Ok(parse_gram(&read(path)?)?)
}

fn pow2(e: usize) -> BigUint {
    BigUint::from(1u32) << e
}

fn fact(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

fn strs<T: Display>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Runs one subcommand.
pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let budget = Budget::from_env();
    match &cli.command {
        Command::E8Frames { samples } => e8_frames(*samples, &budget),
        Command::FrameInvariants { gram, frame } => frame_invariants(gram, frame, &budget),
        Command::Markings { code } => markings(code),
        Command::StabilizerOrders { k } => stabilizer_orders(*k),
        Command::Miyamoto { k } => miyamoto(*k),
        Command::Unimodularize { gram, mode, min_prime } => unimodularize_cmd(gram, *mode, *min_prime, &budget),
        Command::F2quad { n, exhaustive } => f2quad(*n, *exhaustive),
        Command::HatVerify { gram } => hat_verify(gram),
    }
}

/// Parses arguments, runs, and renders. Returns the exit code and the text
/// for stdout and stderr.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return if code == EXIT_OK {
                (code, e.to_string(), String::new())
            } else {
                (code, String::new(), e.to_string())
            };
        }
    };
    match run(&cli) {
        Ok(report) => {
            let text = if cli.compact {
                serde_json::to_string(&report)
            } else {
                serde_json::to_string_pretty(&report)
            }
            .expect("report serializes");
            (report.exit_code(), text + "\n", String::new())
        }
        Err(f) => (f.code, String::new(), format!("error: {}\n", f.message)),
    }
}

const TABLE: [(&str, &str, u64, u64); 4] = [
    ("K8", "2^6 x 4^1", 128, 5_160_960),
    ("K8'", "2^4 x 4^2", 64, 73_728),
    ("L8", "2^2 x 4^3", 16, 6_144),
    ("O8", "4^4", 2, 2_688),
];

fn e8_frames(samples: usize, budget: &Budget) -> Result<Report, Failure> {
    let mut r = Report::new("e8-frames", json!({ "samples": samples }));
    let e8 = e8_code_lattice().lattice;
    let frames = e8_table_frames(budget)?;
    let gc_expected = [15, 14, 12, 9];
    let quotient = [fact(8), BigUint::from(1152u32), BigUint::from(384u32), BigUint::from(1344u32)];
    let mut rows = Vec::new();
    for (i, (name, x)) in frames.iter().enumerate() {
        let stab = vftk_core::frame::frame_stabilizer_wx(&e8, x)?;
        let inv = gcapn_invariants_with(&e8, x, &stab)?;
        let wt = wtilde_frame_stabilizer(&e8, x, &stab)?;
        let (ename, etype, edx, ewx) = TABLE[i];
        r.check(format!("{ename} name"), ename, name, Basis::Published);
        r.check(format!("{ename} delta type"), etype, inv.delta_type(), Basis::Published);
        r.check(format!("{ename} |D_X|"), edx, &inv.dx_order, Basis::Published);
        r.check(format!("{ename} |W_X|"), ewx, &inv.wx_order, Basis::Published);
        r.check(format!("{ename} |G_C|"), pow2(gc_expected[i]), &inv.gc_order, Basis::Published);
        r.check(
            format!("{ename} |(G∩N)/G_C|"),
            pow2(8) * &quotient[i],
            &inv.g_over_gc_order,
            Basis::Published,
        );
        r.check(
            format!("{ename} torus quotient type"),
            strs(&inv.gcapt_formula).join(","),
            strs(&inv.gcapt_type).join(","),
            Basis::Derived,
        );
        rows.push(json!({
            "name": name,
            "delta_type": inv.delta_type(),
            "l": inv.l,
            "k": inv.k,
            "e": inv.e,
            "dx_order": inv.dx_order.to_string(),
            "wx_order": inv.wx_order.to_string(),
            "gc_order": inv.gc_order.to_string(),
            "g_over_gc_order": inv.g_over_gc_order.to_string(),
            "g_cap_t_type": strs(&inv.gcapt_type),
            "g_order": inv.g_order.as_ref().map(|g| g.to_string()),
            "wtilde_pairwise_order": wt.pairwise_order.to_string(),
            "wtilde_setwise_order": wt.setwise_order.to_string(),
        }));
    }
    let census = classify_e8_frames_with(budget, samples)?;
    let mut classes = Vec::new();
    let expected_counts = [("K8", 135u64), ("K8'", 9450), ("L8", 113_400), ("O8", 259_200)];
    for (name, count) in expected_counts {
        let cl = census.classes.iter().find(|c| c.name == name);
        r.check(
            format!("{name} class size"),
            count,
            cl.map_or("missing".to_string(), |c| c.count.to_string()),
            Basis::Derived,
        );
        if let Some(c) = cl {
            r.check(
                format!("{name} size * |W_X|"),
                WEYL_E8_ORDER,
                BigUint::from(c.count) * &c.wx_order,
                Basis::Derived,
            );
            classes.push(json!({
                "name": c.name,
                "delta_type": type_string(c.l, c.k),
                "count": c.count.to_string(),
                "wx_order": c.wx_order.to_string(),
                "dx_order": c.dx_order.to_string(),
                "sampled": c.sampled,
            }));
        }
    }
    r.check("total frames", 382_185, census.total, Basis::Derived);
    r.results = json!({
        "table": rows,
        "census": { "total": census.total.to_string(), "classes": classes, "vf_orbits": census.vf_orbits },
    });
    Ok(r)
}

fn frame_invariants(gram: &Path, frame: &Path, budget: &Budget) -> Result<Report, Failure> {
    let mut r = Report::new(
        "frame-invariants",
        json!({ "gram": gram.display().to_string(), "frame": frame.display().to_string() }),
    );
    let l = read_gram(gram)?;
    let x = LatticeFrame::new(&l, parse_frame(&read(frame)?)?)?;
    let stab = vftk_core::frame::code_stabilizer(&vftk_core::frame::delta_code(&l, &x)?, budget)?;
    let inv = gcapn_invariants_with(&l, &x, &stab)?;
    r.check(
        "torus quotient type",
        strs(&inv.gcapt_formula).join(","),
        strs(&inv.gcapt_type).join(","),
        Basis::Derived,
    );
    r.check("|D_X| divides |W_X|", "true", (&inv.wx_order % &inv.dx_order == BigUint::from(0u32)).to_string(), Basis::Trivial);
    r.results = json!({
        "delta_type": inv.delta_type(),
        "l": inv.l,
        "k": inv.k,
        "e": inv.e,
        "wx_order": inv.wx_order.to_string(),
        "dx_order": inv.dx_order.to_string(),
        "gd_order": inv.gd_order.to_string(),
        "gc_order": inv.gc_order.to_string(),
        "g_cap_t_type": strs(&inv.gcapt_type),
        "g_over_gc_order": inv.g_over_gc_order.to_string(),
        "g_order": inv.g_order.as_ref().map(|g| g.to_string()),
    });
    Ok(r)
}

fn load_code(name: &str) -> Result<BinaryCode, Failure> {
    match name {
        "h8" => Ok(hamming_code(8)?),
        "h16" => Ok(hamming_code(16)?),
        path => Ok(parse_code(&read(Path::new(path))?)?),
    }
}

fn markings(code: &str) -> Result<Report, Failure> {
    let mut r = Report::new("markings", json!({ "code": code }));
    let c = load_code(code)?;
    let aut = code_automorphisms(&c)?;
    let orbits = classify_markings(&c)?;
    let total: u64 = orbits.iter().map(|o| o.size).sum();
    r.check("markings total", marking_count(c.length()), total, Basis::Trivial);
    if code == "h8" {
        r.check("|Aut(H8)|", 1344, &aut.order, Basis::Published);
        r.check("marking orbits", 3, orbits.len(), Basis::Published);
    }
    r.results = json!({
        "length": c.length(),
        "dim": c.dim(),
        "aut_order": aut.order.to_string(),
        "orbits": orbits.iter().map(|o| json!({
            "representative": o.representative.to_string(),
            "size": o.size.to_string(),
        })).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn stabilizer_orders(k: usize) -> Result<Report, Failure> {
    let mut r = Report::new("stabilizer-orders", json!({ "k": k }));
    let gc = gc_order(k)?;
    let quot = order_sym_wr_agl(k)?;
    let g = frame_group_order(k)?;
    r.check("|G| = |G_C| |G/G_C|", &gc * &quot, &g, Basis::Derived);
    match k {
        1 => r.check("|G|", pow2(15) * fact(16), &g, Basis::Derived),
        5 => {
            r.check("|G| as 2^9 |GL(4,2)|", pow2(9) * BigUint::from(20160u32), &g, Basis::Published);
            r.check("|G| as 2^5 |AGL(4,2)|", pow2(5) * agl_order(4), &g, Basis::Published);
            r.check("|G| as 4^4 2 |GL(4,2)|", pow2(9) * gl2_order(4), &g, Basis::Published);
        }
        _ => {}
    }
    r.results = json!({
        "gc_order": gc.to_string(),
        "g_over_gc_order": quot.to_string(),
        "g_order": g.to_string(),
    });
    Ok(r)
}

fn miyamoto(k: usize) -> Result<Report, Failure> {
    let mut r = Report::new("miyamoto", json!({ "k": k }));
    let m = miyamoto_involutions(k)?;
    r.check("distinct involutions", 1usize << (k - 1), m.distinct.len(), Basis::Published);
    r.check("affine coset", true, m.is_affine_coset, Basis::Published);
    let mut chars = Vec::new();
    for chi in 1u32..1 << k {
        let c = involution_class(k, chi)?;
        r.check(format!("chi={chi:#b} -1 eigenspace"), 128, c.minus_dim, Basis::Published);
        r.check(format!("chi={chi:#b} dim V_1"), 248, c.total_dim, Basis::Trivial);
        chars.push(json!({ "character": chi, "minus_dim": c.minus_dim, "plus_dim": c.plus_dim, "class": c.class }));
    }
    r.results = json!({
        "distinct": m.distinct,
        "per_coordinate": m.per_coordinate,
        "characters": chars,
    });
    Ok(r)
}

fn embedding(u: &Unimodularization) -> Value {
    let ov = &u.overlattice;
    json!({
        "denominator": ov.denominator.to_string(),
        "basis": ov.basis.iter().map(|row| strs(row)).collect::<Vec<_>>(),
    })
}

fn unimodularize_cmd(gram: &Path, mode: Mode, min_prime: i64, budget: &Budget) -> Result<Report, Failure> {
    let l = read_gram(gram)?;
    let mut r = Report::new(
        "unimodularize",
        json!({ "gram": gram.display().to_string(), "mode": format!("{mode:?}").to_lowercase(), "min_prime": min_prime }),
    );
    let (u, s) = match mode {
        Mode::Definite => (unimodularize(&l)?, None),
        Mode::Hyperbolic => (hyperbolic_unimodularize(&l)?, None),
        Mode::PrimePower => {
            let s = dirichlet_prime(&l, min_prime)?;
            (preg4_twist(&l, s)?, Some(s))
        }
    };
    let m = u.lattice();
    let det = m.abs_det()?;
    r.check("even", true, m.is_even(), Basis::Trivial);
    match s {
        None => r.check("|det|", 1, &det, Basis::Derived),
        Some(s) => r.check(
            "|det| = s^n",
            num_bigint::BigInt::from(s).pow(l.rank() as u32),
            &det,
            Basis::Derived,
        ),
    }
    r.check("input is primitive", true, u.is_primitive()?, Basis::Derived);
    let sig = signature(m);
    if mode == Mode::Definite && l.is_positive_definite() {
        r.check("definite", true, sig.1 == 0, Basis::Derived);
    }
    let mut aut_info = Value::Null;
    if l.rank() <= 8 && l.is_positive_definite() {
        let aut = lattice_automorphisms(&l, 20_000, budget)?;
        let verdicts = strong_extension_check(&u, &aut.generators)?;
        for (i, v) in verdicts.iter().enumerate() {
            r.check(format!("generator {i} extends"), true, v.extends, Basis::Derived);
        }
        aut_info = json!({
            "generators": aut.generators.len(),
            "order": aut.order.map(|o| o.to_string()),
            "complete": aut.complete,
        });
    }
    r.results = json!({
        "copies": u.copies,
        "rank": m.rank(),
        "signature": [sig.0, sig.1],
        "determinant": det.to_string(),
        "prime": s,
        "gram": m.stored_gram().iter().map(|row| strs(row)).collect::<Vec<_>>(),
        "gram_scale": if m.scale() == vftk_core::lattice::Scale::Half { "1/2" } else { "1" },
        "embedding": embedding(&u),
        "automorphisms": aut_info,
    });
    Ok(r)
}

fn f2quad(n: usize, exhaustive: bool) -> Result<Report, Failure> {
    let mut r = Report::new("f2quad", json!({ "n": n, "exhaustive": exhaustive }));
    let c = orbit_census(n, exhaustive)?;
    r.check("orbits", n, c.orbit_count(), Basis::Published);
    r.check("orbit sizes sum to |Σ|", sigma_total_formula(n), census_total(&c), Basis::Derived);
    if let Some(m) = c.orbits_match_indicator {
        r.check("orbits are indicator classes", true, m, Basis::Published);
    }
    if n <= 12 {
        let w = hyperbolic_space(n)?;
        r.check("nonsingular vectors", nonsingular_count_formula(n), w.nonsingular_count()?, Basis::Derived);
    }
    if n == 5 {
        r.check("|U| at j=0", pow2(4), c.u_order(0).cloned().unwrap_or_default(), Basis::Published);
        r.check("|U| at j=4", pow2(14), c.u_order(4).cloned().unwrap_or_default(), Basis::Published);
        r.check("|P|", pow2(10) * gl2_order(5), &c.parabolic_order, Basis::Published);
    }
    r.results = json!({
        "n": n,
        "sigma_size": c.sigma_size.to_string(),
        "parabolic_order": c.parabolic_order.to_string(),
        "orbits": c.rows.iter().map(|row| json!({
            "j": row.j,
            "size": row.size.to_string(),
            "h_order": row.h_order.to_string(),
            "u_order": row.u_order.to_string(),
            "levi": row.levi,
        })).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn hat_verify(gram: &Path) -> Result<Report, Failure> {
    let l = read_gram(gram)?;
    let mut r = Report::new("hat-verify", json!({ "gram": gram.display().to_string() }));
    let n = l.rank();
    let hat = HatGroup::new(&l)?;
    let samples = basis_samples(n);
    let mut triples = 0u64;
    let mut failures = 0u64;
    for x in &samples {
        for y in &samples {
            for z in samples.iter().take(n) {
                triples += 1;
                if !hat.relations_hold(x, y, z) {
                    failures += 1;
                }
            }
        }
    }
    r.check("relation failures", 0, failures, Basis::Derived);
    let pairs: Vec<(Vec<i64>, Vec<i64>)> = samples
        .iter()
        .flat_map(|x| samples.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let mut lifts_info = Value::Null;
    if n <= 12 {
        let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let lifts = all_lifts(&hat, &id)?;
        let kernel = lifts.iter().filter(|p| is_kernel_element(p, &pairs)).count();
        r.check("lifts of the identity", 1u64 << n, lifts.len(), Basis::Trivial);
        r.check("kernel elements", 1u64 << n, kernel, Basis::Derived);
        let neg: Vec<Vec<i64>> = id.iter().map(|row| row.iter().map(|x| -x).collect()).collect();
        let neg_lifts = all_lifts(&hat, &neg)?;
        let homs = neg_lifts.iter().filter(|p| is_hat_homomorphism(&hat, p, &pairs)).count();
        r.check("lifts of -1 that are homomorphisms", 1u64 << n, homs, Basis::Derived);
        lifts_info = json!({ "identity": lifts.len(), "kernel": kernel, "minus_one_homomorphisms": homs });
    }
    r.results = json!({
        "rank": n,
        "epsilon": hat_eps_table(&l)?,
        "triples_checked": triples,
        "lifts": lifts_info,
    });
    Ok(r)
}

fn hat_eps_table(l: &IntegralLattice) -> Result<Vec<Vec<i8>>, Failure> {
    Ok(vftk_core::hat::epsilon_from_basis(l)?.table())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_sets_exit_code() {
        let mut r = Report::new("t", json!({}));
        r.check("a", 1, 1, Basis::Trivial);
        assert_eq!(r.exit_code(), EXIT_OK);
        r.check("b", 1, 2, Basis::Derived);
        assert_eq!(r.exit_code(), EXIT_CHECK_FAILED);
        assert!(!r.checks[1].pass);
    }

    #[test]
    fn budget_error_maps_to_exit_4() {
        assert_eq!(Failure::from(Error::BudgetExceeded).code, EXIT_BUDGET);
        assert_eq!(Failure::from(Error::Singular).code, EXIT_INPUT);
    }
}
