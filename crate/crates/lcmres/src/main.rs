//! Command-line interface: parsing, orchestration, and deterministic
//! JSON/text serialization for every subcommand.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use lcmres::check::{
    check, generic_linear_reduction, sufficient_squarefree_test, DepthOracle,
    SquarefreeVerdict,
};
use lcmres::dga::{atomic_dga, leibniz_check, tor_algebra, GradedLattice};
use lcmres::error::Error;
use lcmres::field::{Field, FieldChoice, PrimeField, Rationals};
use lcmres::homology::homology;
use lcmres::io::{
    graded_lattice_from_file, lattice_payload, parse_depth_table, parse_generator_file,
    LatticeFile, ParsedInput,
};
use lcmres::lattice::LcmLattice;
use lcmres::minres::{minimal_resolution, verify_resolution};
use lcmres::model::MonomialCombo;
use lcmres::scarf::scarf_report;
use lcmres::taylor::{betti_routes, taylor_complex};

#[derive(Parser)]
#[command(name = "lcmres", version, about = "Exact resolutions from factored generators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit the lcm lattice: elements, Hasse edges, fiber sizes.
    Lattice(Common),
    /// The Betti vector, computed three independent ways.
    Betti(Common),
    /// The Taylor complex over the abstract factor algebra.
    Taylor(Common),
    /// Certify the acyclicity criterion.
    Check(CheckArgs),
    /// The minimal free resolution and its verification report.
    Minres(Common),
    /// Scarf subcomplex and coincidence/shape report.
    Scarf(Common),
    /// The Tor algebra: homology classes and structure constants.
    Tor(Common),
    /// The DGA on the relative atomic complex.
    Dga(DgaArgs),
}

#[derive(Args)]
struct Common {
    /// Generator file.
    input: PathBuf,
    /// Coefficient field: `q` or `fp:<prime>`.
    #[arg(long, default_value = "q")]
    field: String,
    /// Seed for verification draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "text"])]
    emit: String,
    /// Cap on the number of generators.
    #[arg(long, default_value_t = lcmres::lattice::DEFAULT_MAX_M)]
    max_m: usize,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: Common,
    /// Saturation/depth mode.
    #[arg(long, default_value = "monomial", value_parser = ["monomial", "linear", "table"])]
    mode: String,
    /// Depth table file (table mode).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Disable the conservative skip rules.
    #[arg(long)]
    no_fast_paths: bool,
}

#[derive(Args)]
struct DgaArgs {
    /// Generator file (ignored when --lattice is given).
    input: Option<PathBuf>,
    /// Explicit lattice file (JSON, as emitted by `lattice`).
    #[arg(long)]
    lattice: Option<PathBuf>,
    #[arg(long, default_value = "q")]
    field: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "json", value_parser = ["json", "text"])]
    emit: String,
    #[arg(long, default_value_t = lcmres::lattice::DEFAULT_MAX_M)]
    max_m: usize,
}

struct Output {
    payload: Value,
    text: String,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Lattice(c) => with_input(c, |lat, _, _, _| {
            let payload = serde_json::to_value(lattice_payload(lat)?)
                .map_err(|e| Error::Internal(e.to_string()))?;
            let mut text = String::new();
            let al = lat.gens().alphabet().clone();
            for (i, e) in lat.elements().iter().enumerate() {
                let _ = writeln!(text, "{i}: {}", e.render(&al));
            }
            let _ = writeln!(text, "hasse edges: {}", lat.hasse_edges().len());
            Ok(Output {
                payload,
                text,
                exit: 0,
            })
        }),
        Cmd::Betti(c) => with_input(c, |lat, field, _, _| match field {
            FieldRef::Q(f) => betti_out(lat, f),
            FieldRef::P(f) => betti_out(lat, f),
        }),
        Cmd::Taylor(c) => with_input(c, |lat, field, _, _| match field {
            FieldRef::Q(f) => taylor_out(lat, f),
            FieldRef::P(f) => taylor_out(lat, f),
        }),
        Cmd::Minres(c) => with_input(c, |lat, field, seed, _| match field {
            FieldRef::Q(f) => minres_out(lat, f, seed),
            FieldRef::P(f) => minres_out(lat, f, seed),
        }),
        Cmd::Scarf(c) => with_input(c, |lat, field, _, _| match field {
            FieldRef::Q(f) => scarf_out(lat, f),
            FieldRef::P(f) => scarf_out(lat, f),
        }),
        Cmd::Tor(c) => with_input(c, |lat, field, _, _| match field {
            FieldRef::Q(f) => tor_out(lat, f),
            FieldRef::P(f) => tor_out(lat, f),
        }),
        Cmd::Check(args) => run_check(args),
        Cmd::Dga(args) => run_dga(args),
    }
}

enum FieldRef<'a> {
    Q(&'a Rationals),
    P(&'a PrimeField),
}

fn with_input(
    c: Common,
    f: impl FnOnce(&LcmLattice, FieldRef<'_>, u64, &ParsedInput) -> Result<Output, Error>,
) -> Result<u8, Error> {
    let bytes = std::fs::read(&c.input)?;
    let hash = hex_sha256(&[&bytes]);
    let parsed = parse_generator_file(&String::from_utf8_lossy(&bytes))?;
    let lat = LcmLattice::build_capped(&parsed.gens, c.max_m)?;
    let choice = FieldChoice::parse(&c.field)?;
    let out = match choice {
        FieldChoice::Rationals => f(&lat, FieldRef::Q(&Rationals), c.seed, &parsed)?,
        FieldChoice::Prime(p) => {
            let pf = PrimeField::new(p)?;
            f(&lat, FieldRef::P(&pf), c.seed, &parsed)?
        }
    };
    emit(&c.emit, &hash, c.seed, out)
}

fn emit(mode: &str, hash: &str, seed: u64, out: Output) -> Result<u8, Error> {
    if mode == "text" {
        print!("{}", out.text);
    } else {
        let envelope = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "inputHash": hash,
            "seed": seed,
            "payload": out.payload,
        });
        println!(
            "{}",
            serde_json::to_string(&envelope).map_err(|e| Error::Internal(e.to_string()))?
        );
    }
    Ok(out.exit)
}

fn hex_sha256(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    let digest = h.finalize();
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn combo_json<F: Field>(c: &MonomialCombo<F>) -> Value {
    let terms: Vec<Value> = c
        .terms()
        .map(|(e, coeff)| json!([coeff.to_string(), e.0]))
        .collect();
    Value::Array(terms)
}

fn sparse_matrices_json<F: Field>(d: &[Vec<Vec<MonomialCombo<F>>>]) -> Value {
    let mut out = Vec::new();
    for (p, mat) in d.iter().enumerate().skip(1) {
        let rows = mat.len();
        let cols = mat.first().map_or(0, |r| r.len());
        let mut entries = Vec::new();
        for (i, row) in mat.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if !entry.is_zero() {
                    entries.push(json!([i, j, combo_json(entry)]));
                }
            }
        }
        out.push(json!({
            "degree": p,
            "rows": rows,
            "cols": cols,
            "entries": entries,
        }));
    }
    Value::Array(out)
}

fn betti_out<F: Field>(lat: &LcmLattice, field: &F) -> Result<Output, Error> {
    let routes = betti_routes(lat, field)?;
    let consistent = routes.via_lattice_homology == routes.via_fiber_complexes
        && routes.via_lattice_homology == routes.via_evaluation;
    if !consistent {
        return Err(Error::Internal(
            "the three Betti computations disagree".into(),
        ));
    }
    let payload = json!({
        "betti": routes.via_lattice_homology,
        "viaLatticeHomology": routes.via_lattice_homology,
        "viaFiberComplexes": routes.via_fiber_complexes,
        "viaEvaluation": routes.via_evaluation,
        "consistent": consistent,
    });
    let text = format!("betti: {:?}\n", routes.via_lattice_homology);
    Ok(Output {
        payload,
        text,
        exit: 0,
    })
}

fn taylor_out<F: Field>(lat: &LcmLattice, field: &F) -> Result<Output, Error> {
    let tc = taylor_complex(lat.gens(), field);
    let al = lat.gens().alphabet().clone();
    let dims: Vec<usize> = (0..=tc.max_degree()).map(|p| tc.dim(p)).collect();
    let basis: Vec<Vec<Vec<usize>>> = tc
        .basis
        .iter()
        .map(|degree| degree.iter().map(|&s| mask_indices(s)).collect())
        .collect();
    let payload = json!({
        "dims": dims,
        "basis": basis,
        "matrices": sparse_matrices_json(&tc.d),
    });
    let mut text = String::new();
    let _ = writeln!(text, "dims: {dims:?}");
    for p in 1..=tc.max_degree() {
        let _ = writeln!(text, "d_{p}:");
        for row in &tc.d[p] {
            let cells: Vec<String> = row.iter().map(|e| e.render(&al)).collect();
            let _ = writeln!(text, "  [{}]", cells.join(", "));
        }
    }
    Ok(Output {
        payload,
        text,
        exit: 0,
    })
}

fn minres_out<F: Field>(lat: &LcmLattice, field: &F, seed: u64) -> Result<Output, Error> {
    let res = minimal_resolution(lat, field)?;
    let report = verify_resolution(&res, lat, field, seed, 3);
    let al = lat.gens().alphabet().clone();
    let basis: Vec<Vec<Vec<Value>>> = res
        .basis
        .iter()
        .map(|degree| {
            degree
                .iter()
                .map(|chain| {
                    chain
                        .iter()
                        .map(|(&mask, coeff)| {
                            json!({"subset": mask_indices(mask), "coeff": coeff.to_string()})
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let payload = json!({
        "betti": res.betti,
        "basis": basis,
        "matrices": sparse_matrices_json(&res.d),
        "verify": {
            "dSquaredZero": report.d_squared_zero,
            "minimal": report.minimal,
            "bettiMatch": report.betti_match,
            "rankConditions": report.rank_conditions,
            "draws": report.draws,
        },
        "pass": report.pass(),
    });
    let mut text = String::new();
    let _ = writeln!(text, "betti: {:?}", res.betti);
    for (p, degree) in res.basis.iter().enumerate() {
        let rendered: Vec<String> = degree
            .iter()
            .map(|chain| {
                chain
                    .iter()
                    .map(|(&mask, coeff)| {
                        format!("{}*{:?}", coeff, mask_indices(mask))
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect();
        let _ = writeln!(text, "M_{p}: {}", rendered.join(" ; "));
    }
    for p in 1..res.d.len() {
        let _ = writeln!(text, "d_{p}:");
        for row in &res.d[p] {
            let cells: Vec<String> = row.iter().map(|e| e.render(&al)).collect();
            let _ = writeln!(text, "  [{}]", cells.join(", "));
        }
    }
    let _ = writeln!(text, "verify pass: {}", report.pass());
    let exit = if report.pass() { 0 } else { 4 };
    Ok(Output {
        payload,
        text,
        exit,
    })
}

fn scarf_out<F: Field>(lat: &LcmLattice, field: &F) -> Result<Output, Error> {
    let report = scarf_report(lat, field)?;
    let basis: Vec<Vec<Vec<usize>>> = report
        .scarf_basis
        .iter()
        .map(|d| d.iter().map(|&s| mask_indices(s)).collect())
        .collect();
    let payload = json!({
        "scarfBasis": basis,
        "scarfSizes": report.scarf_sizes(),
        "isGeneric": report.is_generic,
        "coincides": report.coincides,
        "allFibersBoolean": report.all_fibers_boolean,
        "intersectionCondition": report.intersection_condition,
    });
    let text = format!(
        "scarf sizes: {:?}\ngeneric: {}\ncoincides: {}\nboolean fibers: {}\nintersection condition: {}\n",
        report.scarf_sizes(),
        report.is_generic,
        report.coincides,
        report.all_fibers_boolean,
        report.intersection_condition,
    );
    Ok(Output {
        payload,
        text,
        exit: 0,
    })
}

fn tor_out<F: Field>(lat: &LcmLattice, field: &F) -> Result<Output, Error> {
    let tor = tor_algebra(lat, field)?;
    let constants: Vec<Value> = tor
        .constants
        .iter()
        .map(|(&(i, j), terms)| {
            let ts: Vec<Value> = terms
                .iter()
                .map(|(k, c)| json!([k, c.to_string()]))
                .collect();
            json!({"i": i, "j": j, "terms": ts})
        })
        .collect();
    let classes: Vec<Value> = tor
        .classes
        .iter()
        .map(|&(d, l)| json!([d, l]))
        .collect();
    let payload = json!({
        "dims": tor.dims,
        "classes": classes,
        "constants": constants,
    });
    let text = format!(
        "homology dims: {:?}\nnonzero products: {}\n",
        tor.dims,
        tor.constants.len()
    );
    Ok(Output {
        payload,
        text,
        exit: 0,
    })
}

fn run_check(args: CheckArgs) -> Result<u8, Error> {
    let c = args.common;
    let bytes = std::fs::read(&c.input)?;
    let table_bytes = match &args.table {
        Some(path) => Some(std::fs::read(path)?),
        None => None,
    };
    let mut parts: Vec<&[u8]> = vec![&bytes];
    if let Some(t) = &table_bytes {
        parts.push(t);
    }
    let hash = hex_sha256(&parts);
    let parsed = parse_generator_file(&String::from_utf8_lossy(&bytes))?;
    let lat = LcmLattice::build_capped(&parsed.gens, c.max_m)?;
    let table = match &table_bytes {
        Some(t) => Some(parse_depth_table(
            &String::from_utf8_lossy(t),
            parsed.gens.alphabet(),
        )?),
        None => None,
    };
    let oracle = match args.mode.as_str() {
        "monomial" => DepthOracle::monomial(),
        "linear" => {
            let real = parsed.realization.as_ref().ok_or_else(|| {
                Error::Input("linear mode requires `realize` rows in the input".into())
            })?;
            DepthOracle::linear(real)
        }
        "table" => {
            let entries = table.as_ref().ok_or_else(|| {
                Error::Input("table mode requires --table <file>".into())
            })?;
            DepthOracle::table(entries)
        }
        other => return Err(Error::Input(format!("unknown mode `{other}`"))),
    };
    let choice = FieldChoice::parse(&c.field)?;
    let out = match choice {
        FieldChoice::Rationals => {
            check_out(&lat, &oracle, &Rationals, !args.no_fast_paths, &args.mode, &parsed)?
        }
        FieldChoice::Prime(p) => {
            let pf = PrimeField::new(p)?;
            check_out(&lat, &oracle, &pf, !args.no_fast_paths, &args.mode, &parsed)?
        }
    };
    emit(&c.emit, &hash, c.seed, out)
}

fn check_out<F: Field>(
    lat: &LcmLattice,
    oracle: &DepthOracle<'_>,
    field: &F,
    fast: bool,
    mode: &str,
    parsed: &ParsedInput,
) -> Result<Output, Error> {
    let cert = check(lat, oracle, field, fast)?;
    let witness = cert.witness.as_ref().map(|w| {
        json!({
            "g": w.g.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "P": w.p_val.0,
            "degree": w.degree,
            "homologyDim": w.homology_dim,
        })
    });
    let mut payload = json!({
        "mode": mode,
        "pass": cert.pass,
        "witness": witness,
        "checkedPairs": cert.checked_pairs,
        "fastPathHits": {"coatomic": cert.fast_path_hits.coatomic},
    });
    if mode == "linear" {
        let real = parsed.realization.as_ref().expect("linear mode");
        let reduction = generic_linear_reduction(lat, real, field)?;
        let sq = sufficient_squarefree_test(lat.gens(), real);
        let obj = payload.as_object_mut().expect("object payload");
        obj.insert(
            "genericReduction".into(),
            match reduction {
                Some(r) => json!({"applicable": true, "pass": r.pass}),
                None => json!({"applicable": false}),
            },
        );
        obj.insert(
            "squarefreeTest".into(),
            json!(match sq {
                SquarefreeVerdict::Pass => "pass",
                SquarefreeVerdict::Unknown => "unknown",
            }),
        );
    }
    let mut text = format!("check: {}\n", if cert.pass { "pass" } else { "fail" });
    if let Some(w) = &cert.witness {
        let _ = writeln!(
            text,
            "witness: G={:?} P={:?} degree={} dim={}",
            w.g, w.p_val.0, w.degree, w.homology_dim
        );
    }
    let exit = if cert.pass { 0 } else { 3 };
    Ok(Output {
        payload,
        text,
        exit,
    })
}

fn run_dga(args: DgaArgs) -> Result<u8, Error> {
    let choice = FieldChoice::parse(&args.field)?;
    let (hash, graded) = if let Some(path) = &args.lattice {
        let bytes = std::fs::read(path)?;
        let file: LatticeFile = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Input(format!("bad lattice file: {e}")))?;
        (hex_sha256(&[&bytes]), graded_lattice_from_file(&file)?)
    } else {
        let path = args.input.as_ref().ok_or_else(|| {
            Error::Input("dga requires a generator file or --lattice <file>".into())
        })?;
        let bytes = std::fs::read(path)?;
        let parsed = parse_generator_file(&String::from_utf8_lossy(&bytes))?;
        let lat = LcmLattice::build_capped(&parsed.gens, args.max_m)?;
        (hex_sha256(&[&bytes]), GradedLattice::from_lcm_lattice(&lat))
    };
    let out = match choice {
        FieldChoice::Rationals => dga_out(graded, &Rationals)?,
        FieldChoice::Prime(p) => {
            let pf = PrimeField::new(p)?;
            dga_out(graded, &pf)?
        }
    };
    emit(&args.emit, &hash, args.seed, out)
}

fn dga_out<F: Field>(graded: GradedLattice, field: &F) -> Result<Output, Error> {
    let dga = atomic_dga(graded, field)?;
    let h = homology(&dga.cc);
    let dims: Vec<usize> = (0..=dga.lattice.num_atoms())
        .map(|p| h.dim(p as i32))
        .collect();
    let leibniz = leibniz_check(&dga);
    if !leibniz {
        return Err(Error::Internal("Leibniz rule failed on the DGA".into()));
    }
    let payload = json!({
        "homologyDims": dims,
        "atoms": dga.lattice.num_atoms(),
        "leibniz": leibniz,
    });
    let text = format!("homology dims: {dims:?}\nleibniz: {leibniz}\n");
    Ok(Output {
        payload,
        text,
        exit: 0,
    })
}
