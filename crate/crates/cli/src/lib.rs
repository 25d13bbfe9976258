//! Subcommands of the `torus-ainf` binary. Each command renders a plain-text
//! report and an exit code: 0 on success, 1 on a mathematical mismatch, 2 on a
//! usage error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use torus_ainf::gauge::{
    expected_mu4_after_g, extract_invariants, gauge_apply, load_gauge, m6_certificate, mc_extend, mc_holds,
    preset_gauge_g, preset_gauge_h, random_gauge, GaugeTransformation, EXPECTED_144_MU6, M6_PROBES,
};
use torus_ainf::hochschild::{coboundary, hh_bar, reference_table, skoldberg_hh, BigradedTable};
use torus_ainf::perturbation::{dump_transfer, lemma_check, preset_splitting_c, transfer};
use torus_ainf::quiver_ainf::{ainf_check, ainf_check_unital, dump, load, AInfStructure, Element, Violation};
use torus_ainf::scalars::parse_scalar;
use torus_ainf::torus_polygons::{
    enumerate_polygons, family_counts, polygon_sign, preset_scene, signed_series, witnesses_svg, CornerSpec,
    PolygonScene,
};
use torus_ainf::useries::{count_partitions_brute_force, partition_series, partition_series_product, theta_v};
use torus_ainf::{FieldSpec, FieldValue};

#[derive(Debug, Parser)]
#[command(name = "torus-ainf", version, about = "Exact A-infinity and polygon computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bar,
    Skoldberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bigraded Hochschild cohomology of A, compared with the expected table.
    HhTable {
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long, default_value_t = 8)]
        rmax: usize,
        #[arg(long, value_enum, default_value_t = Method::Bar)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transfer, both gauge fixes, and the nonvanishing certificate for m6.
    M6 {
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal model of C by homological perturbation.
    MinimalModel {
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Arity bound for the relation check (default: min(order, 10)).
        #[arg(long)]
        check_up_to: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply gauge transformations and report the normalized structure.
    GaugeFix {
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Structure file; defaults to the minimal model of C.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Gauge files applied in the given order; defaults to the two presets.
        #[arg(long)]
        gauge: Vec<PathBuf>,
        /// Apply a random gauge with this seed instead.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal structure on A with prescribed invariants (m6, m8).
    Mc {
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long, allow_hyphen_values = true)]
        m6: String,
        #[arg(long, allow_hyphen_values = true)]
        m8: String,
        #[arg(long, default_value_t = 12)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// u^3 v = 1 for the partition and theta series.
    Jacobi {
        #[arg(long, default_value_t = 50)]
        order: usize,
        /// Compare partition numbers with explicit enumeration up to this n.
        #[arg(long, default_value_t = 30)]
        brute: usize,
    },
    /// Polygon counts for the exact triangle on the marked torus.
    Triangle {
        #[arg(long, default_value_t = 4)]
        wrap: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Scene file; defaults to the built-in scene.
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Write an SVG of the witnesses up to wrap 1.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check the A-infinity relations of a structure file.
    Check {
        file: PathBuf,
        /// Arity bound (default: order + 1).
        #[arg(long)]
        order: Option<usize>,
    },
}

/// Rendered report and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(ok: bool, stdout: String) -> Self {
        Outcome {
            code: if ok { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome::usage(text),
            }
        }
    }
}

pub fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::HhTable { field, rmax, method, format, out } => {
            with_out(out, cmd_hh_table(field, rmax, method, format))
        }
        Command::M6 { field, out } => with_out(out, cmd_m6(field)),
        Command::MinimalModel { field, order, check_up_to, out } => {
            with_artifact(out, cmd_minimal_model(field, order, check_up_to))
        }
        Command::GaugeFix { field, order, input, gauge, seed, out } => {
            with_artifact(out, cmd_gauge_fix(field, order, input, gauge, seed))
        }
        Command::Mc { field, m6, m8, order, out } => with_artifact(out, cmd_mc(field, &m6, &m8, order)),
        Command::Jacobi { order, brute } => cmd_jacobi(order, brute),
        Command::Triangle { wrap, format, scene, svg } => cmd_triangle(wrap, format, scene, svg),
        Command::Check { file, order } => cmd_check(&file, order),
    }
}

fn with_out(out: Option<PathBuf>, o: Outcome) -> Outcome {
    match out {
        Some(path) if o.code != 2 => match std::fs::write(&path, &o.stdout) {
            Ok(()) => o,
            Err(e) => Outcome::usage(format!("cannot write {}: {e}", path.display())),
        },
        _ => o,
    }
}

/// Report plus a structure dump: the dump goes to `out` if given, otherwise
/// it is appended to the report.
fn with_artifact(out: Option<PathBuf>, r: Result<(Outcome, String), Outcome>) -> Outcome {
    let (mut o, artifact) = match r {
        Ok(x) => x,
        Err(o) => return o,
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &artifact) {
                return Outcome::usage(format!("cannot write {}: {e}", path.display()));
            }
            let _ = writeln!(o.stdout, "wrote {}", path.display());
        }
        None => o.stdout.push_str(&artifact),
    }
    o
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn verdict(out: &mut String, ok: bool) {
    let _ = writeln!(out, "RESULT {}", if ok { "PASS" } else { "FAIL" });
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn hh_table(field: FieldSpec, rmax: usize, method: Method) -> BigradedTable {
    match method {
        Method::Bar => hh_bar(field, rmax),
        Method::Skoldberg => skoldberg_hh(field, rmax),
    }
}

pub fn cmd_hh_table(field: FieldSpec, rmax: usize, method: Method, format: Format) -> Outcome {
    let table = hh_table(field, rmax, method);
    let reference = reference_table(field, rmax);
    let mut out = String::new();
    match format {
        Format::Table => {
            let _ = write!(out, "{table}");
        }
        Format::Records => out.push_str(&table.records()),
    }
    let diff = table.diff(&reference);
    for (r, s, got, want) in &diff {
        let _ = writeln!(out, "mismatch at (r, s) = ({r}, {s}): computed {got}, expected {want}");
    }
    let _ = writeln!(
        out,
        "method {} | 0 <= r <= {rmax} | {}",
        match method {
            Method::Bar => "bar",
            Method::Skoldberg => "skoldberg",
        },
        if diff.is_empty() { "matches expected table" } else { "differs from expected table" }
    );
    verdict(&mut out, diff.is_empty());
    Outcome::new(diff.is_empty(), out)
}

/// Transferred structure of C through `order`.
pub fn minimal_model(field: FieldSpec, order: usize) -> AInfStructure {
    transfer(&preset_splitting_c(field), order).minimal
}

fn small_char(field: FieldSpec) -> bool {
    matches!(field.characteristic(), 2 | 3)
}

pub fn cmd_m6(field: FieldSpec) -> Outcome {
    if small_char(field) {
        return Outcome::usage(format!(
            "m6 needs 2 and 3 to be invertible; {field} has characteristic {}",
            field.characteristic()
        ));
    }
    let exploratory = field != FieldSpec::Rational;
    let mut out = String::new();
    let mut ok = true;
    let mut step = |out: &mut String, label: &str, good: bool| {
        ok &= good;
        let _ = writeln!(out, "{label}: {}", status(good));
    };
    let _ = writeln!(out, "field {field}{}", if exploratory { " (exploratory)" } else { "" });
    let split = preset_splitting_c(field);
    step(&mut out, "splitting data of C", split.validate().is_ok());
    let t = transfer(&split, 8);
    let lemma = lemma_check(&t, 8);
    step(
        &mut out,
        &format!("transfer through order 8, closed form on {} entries", lemma.checked_entries),
        lemma.ok(),
    );
    let b = t.minimal;
    let after_g = gauge_apply(&preset_gauge_g(field), &b, 8);
    step(&mut out, "after G: mu3 = 0", after_g.mu[3].is_zero());
    step(
        &mut out,
        &format!("after G: mu4 equals the 13-entry table ({} entries)", after_g.mu[4].len()),
        after_g.mu[4] == expected_mu4_after_g(field),
    );
    let fin = gauge_apply(&preset_gauge_h(field), &after_g, 8);
    step(&mut out, "after H: mu3 = 0 and mu4 = 0", fin.mu[3].is_zero() && fin.mu[4].is_zero());
    step(&mut out, "after H: delta mu6 = 0", coboundary(&fin, &fin.mu[6]).is_zero());
    let cert = match m6_certificate(&fin, &fin.mu[6]) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let cat = fin.cat();
    for (((probe, got), (n, g)), names) in cert.probes.iter().zip(EXPECTED_144_MU6).zip(M6_PROBES) {
        let want = Element::term(cat.gen(g).expect("generator of A"), FieldValue::from_i64(n, field));
        let t: Vec<_> = names.iter().map(|x| cat.gen(x).expect("generator of A")).collect();
        let have = fin.mu[6].get(&t).cloned().unwrap_or_default().scaled(&FieldValue::from_i64(144, field));
        step(
            &mut out,
            &format!("144*mu6({probe}) = {got}, expected {}", want.display(cat)),
            have == want,
        );
    }
    let _ = writeln!(out, "forced values:");
    for line in &cert.chain {
        let _ = writeln!(out, "  {line}");
    }
    match (&cert.pairing, cert.infeasible) {
        (Some(p), true) => {
            let _ = writeln!(out, "delta nu = mu6: infeasible, separating functional pairs to {p}");
        }
        _ => {
            let _ = writeln!(out, "delta nu = mu6: solvable");
        }
    }
    let _ = writeln!(out, "m6 {}", if cert.infeasible { "NONZERO" } else { "ZERO" });
    if exploratory {
        let _ = writeln!(out, "RESULT REPORTED");
        return Outcome::new(true, out);
    }
    ok &= cert.infeasible && cert.chain_contradiction;
    verdict(&mut out, ok);
    Outcome::new(ok, out)
}

fn violations_summary(out: &mut String, mu: &AInfStructure, v: &[Violation], up_to: usize) {
    let _ = writeln!(out, "relations through arity {up_to}: {} violations", v.len());
    for x in v.iter().take(10) {
        let _ = writeln!(
            out,
            "  arity {} ({}) -> {}",
            x.arity,
            mu.cat().fmt_tuple(&x.tuple),
            x.residual.display(mu.cat())
        );
    }
}

fn check_relations(mu: &AInfStructure, up_to: usize) -> Vec<Violation> {
    if mu.cat().identities.iter().all(Option::is_some) {
        ainf_check_unital(mu, up_to)
    } else {
        ainf_check(mu, up_to)
    }
}

pub fn cmd_minimal_model(
    field: FieldSpec,
    order: usize,
    check_up_to: Option<usize>,
) -> Result<(Outcome, String), Outcome> {
    if order < 2 {
        return Err(Outcome::usage("--order must be at least 2"));
    }
    let split = preset_splitting_c(field);
    if let Err(e) = split.validate() {
        return Err(Outcome::usage(format!("splitting data invalid over {field}: {e}")));
    }
    let t = transfer(&split, order);
    let lemma = lemma_check(&t, order);
    let mut out = String::new();
    let _ = writeln!(out, "field {field}, order {order}");
    let _ = writeln!(out, "closed form on {} entries: {}", lemma.checked_entries, status(lemma.ok()));
    for m in lemma.mismatches.iter().take(10) {
        let _ = writeln!(out, "  {m}");
    }
    let up_to = check_up_to.unwrap_or(order.min(10));
    let v = ainf_check_unital(&t.minimal, up_to);
    violations_summary(&mut out, &t.minimal, &v, up_to);
    let ok = lemma.ok() && v.is_empty();
    verdict(&mut out, ok);
    Ok((Outcome::new(ok, out), dump_transfer(&split, &t)))
}

fn describe_orders(out: &mut String, mu: &AInfStructure) {
    for d in 3..=mu.order {
        let c = &mu.mu[d];
        if c.is_zero() {
            let _ = writeln!(out, "mu{d} = 0");
        } else {
            let _ = writeln!(out, "mu{d}: {} entries", c.len());
        }
    }
}

fn invariants_line(out: &mut String, label: &str, mu: &AInfStructure) -> Option<(FieldValue, FieldValue)> {
    if small_char(mu.spec) || mu.order < 8 {
        return None;
    }
    match extract_invariants(mu) {
        Ok(inv) => {
            let _ = writeln!(out, "{label}: m6 = {}, m8 = {}", inv.m6, inv.m8);
            Some((inv.m6, inv.m8))
        }
        Err(e) => {
            let _ = writeln!(out, "{label}: invariants unavailable ({e})");
            None
        }
    }
}

pub fn cmd_gauge_fix(
    field: FieldSpec,
    order: usize,
    input: Option<PathBuf>,
    gauges: Vec<PathBuf>,
    seed: Option<u64>,
) -> Result<(Outcome, String), Outcome> {
    let mu = match &input {
        Some(p) => {
            let mu = load(&read(p)?).map_err(|e| Outcome::usage(e.to_string()))?;
            mu.with_order(order.min(mu.order))
        }
        None => minimal_model(field, order),
    };
    let mut steps: Vec<(String, GaugeTransformation)> = Vec::new();
    if let Some(s) = seed {
        if !gauges.is_empty() {
            return Err(Outcome::usage("--seed and --gauge are exclusive"));
        }
        steps.push((format!("random gauge (seed {s})"), random_gauge(mu.spec, s, 4, 0.1)));
    } else if gauges.is_empty() {
        steps.push(("G".into(), preset_gauge_g(mu.spec)));
        steps.push(("H".into(), preset_gauge_h(mu.spec)));
    } else {
        for p in &gauges {
            let g = load_gauge(&read(p)?).map_err(|e| Outcome::usage(e.to_string()))?;
            steps.push((p.display().to_string(), g));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "field {}, order {}", mu.spec, mu.order);
    let before = invariants_line(&mut out, "before", &mu);
    let mut cur = mu;
    for (label, g) in &steps {
        cur = gauge_apply(g, &cur, cur.order);
        let _ = writeln!(out, "after {label}:");
        describe_orders(&mut out, &cur);
    }
    let up_to = cur.order.min(8);
    let v = check_relations(&cur, up_to);
    violations_summary(&mut out, &cur, &v, up_to);
    let after = invariants_line(&mut out, "after", &cur);
    let mut ok = v.is_empty();
    if let (Some(b), Some(a)) = (&before, &after) {
        let same = a == b;
        let _ = writeln!(out, "invariants preserved: {}", status(same));
        ok &= same;
    }
    verdict(&mut out, ok);
    Ok((Outcome::new(ok, out), dump(&cur)))
}

pub fn cmd_mc(field: FieldSpec, m6: &str, m8: &str, order: usize) -> Result<(Outcome, String), Outcome> {
    let a = parse_scalar(m6, field).map_err(|e| Outcome::usage(format!("--m6: {e}")))?;
    let b = parse_scalar(m8, field).map_err(|e| Outcome::usage(format!("--m8: {e}")))?;
    if order < 8 {
        return Err(Outcome::usage("--order must be at least 8"));
    }
    let mu = mc_extend(field, &a, &b, order).map_err(|e| Outcome::usage(e.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(out, "field {field}, prescribed m6 = {a}, m8 = {b}, order {order}");
    describe_orders(&mut out, &mu);
    let mc_ok = (3..=order).all(|d| mc_holds(&mu, d));
    let _ = writeln!(out, "order-by-order MC equation: {}", status(mc_ok));
    let v = ainf_check_unital(&mu, order);
    violations_summary(&mut out, &mu, &v, order);
    let read_back = invariants_line(&mut out, "read back", &mu);
    let back_ok = read_back.as_ref().is_some_and(|(x, y)| *x == a && *y == b);
    let _ = writeln!(out, "invariants read back: {}", status(back_ok));
    let ok = mc_ok && v.is_empty() && back_ok;
    verdict(&mut out, ok);
    Ok((Outcome::new(ok, out), dump(&mu)))
}

pub fn cmd_jacobi(order: usize, brute: usize) -> Outcome {
    let u = partition_series(order);
    let v = theta_v(order);
    let prod = u.pow(3).mul(&v).expect("same order");
    let mut out = String::new();
    let head = order.min(12);
    let _ = writeln!(out, "u = {}", u.truncate(head));
    let _ = writeln!(out, "v = {}", v.truncate(head));
    let _ = writeln!(out, "u^3 v mod U^{} = {}", order + 1, prod);
    let product_ok = partition_series_product(order) == u;
    let _ = writeln!(out, "u equals prod (1 - U^m)^(-1): {}", status(product_ok));
    let n = brute.min(order);
    let brute_ok = (0..=n).all(|k| u.coeff(k) == &count_partitions_brute_force(k).into());
    let _ = writeln!(out, "p(n) by enumeration for n <= {n}: {}", status(brute_ok));
    let ok = prod.is_one() && product_ok && brute_ok;
    verdict(&mut out, ok);
    Outcome::new(ok, out)
}

pub fn cmd_triangle(wrap: u32, format: Format, scene: Option<PathBuf>, svg: Option<PathBuf>) -> Outcome {
    let scene = match scene {
        Some(p) => match read(&p).and_then(|t| PolygonScene::parse(&t).map_err(|e| Outcome::usage(e.to_string()))) {
            Ok(s) => s,
            Err(o) => return o,
        },
        None => preset_scene(),
    };
    if let Err(e) = scene.validate() {
        return Outcome::usage(e.to_string());
    }
    match triangle_report(&scene, wrap, format, svg) {
        Ok(o) => o,
        Err(msg) => Outcome::usage(msg),
    }
}

fn triangle_report(scene: &PolygonScene, wrap: u32, format: Format, svg: Option<PathBuf>) -> Result<Outcome, String> {
    let order = (wrap * (wrap + 1) / 2) as usize;
    let mut out = String::new();
    let mut ok = true;
    let _ = writeln!(out, "wrap bound {wrap}, series modulo U^{}", order + 1);
    let mut svg_witnesses = Vec::new();
    let mut mu3 = None;
    for (label, spec) in [
        ("mu2(e01, e20)", CornerSpec::mu2_first()),
        ("mu2(e20, e12)", CornerSpec::mu2_second()),
        ("mu3(e01, e20, e12)", CornerSpec::mu3()),
    ] {
        let ws = enumerate_polygons(scene, &spec, wrap).map_err(|e| e.to_string())?;
        let _ = writeln!(out, "{label}: {} polygons", ws.len());
        match format {
            Format::Records => {
                for w in &ws {
                    let _ = writeln!(out, "  {w}");
                }
            }
            Format::Table => {
                let fams = family_counts(scene, &ws);
                for (band, counts) in &fams {
                    let ms: Vec<u64> = ws.iter().filter(|w| w.wrap == *band).map(|w| w.m).collect();
                    let signs: i64 = ws.iter().filter(|w| w.wrap == *band).map(polygon_sign).sum();
                    let _ = writeln!(
                        out,
                        "  band {band}: family sizes {counts:?}, m = {}, signed count {signs}",
                        ms.first().copied().unwrap_or(0)
                    );
                }
            }
        }
        let triangles = spec.d() == 2;
        for p in 0..=wrap {
            let band: Vec<_> = ws.iter().filter(|w| w.wrap == p).collect();
            let want_m = (p * (p + 1) / 2) as u64;
            let m_ok = band.iter().all(|w| w.m == want_m);
            let count_ok = if triangles {
                band.len() == 2
            } else {
                let fams = family_counts(scene, &ws);
                let expect: Vec<usize> = if p == 0 { vec![1] } else { vec![p as usize + 1, p as usize] };
                fams.get(&p) == Some(&expect)
            };
            ok &= m_ok && count_ok && band.iter().all(|w| w.degree_defect == 0);
        }
        let series = signed_series(&ws, wrap);
        let _ = writeln!(out, "  coefficient series: {series}");
        if triangles {
            ok &= series.is_zero();
        } else {
            mu3 = Some(series);
        }
        svg_witnesses.extend(ws.into_iter().filter(|w| w.wrap <= 1));
    }
    let mu3 = mu3.expect("quadrilaterals enumerated");
    let minus_v = theta_v(order).neg();
    let is_minus_v = mu3 == minus_v;
    let _ = writeln!(out, "mu3 coefficient equals -v: {}", status(is_minus_v));
    let unit = partition_series(order).pow(3).mul(&mu3).expect("same order").neg();
    let _ = writeln!(out, "-u^3 mu3 = {unit}");
    let _ = writeln!(out, "-u^3 mu3 is the identity coefficient: {}", status(unit.is_one()));
    let _ = writeln!(out, "mu2 products vanish: {}", status(ok));
    ok &= is_minus_v && unit.is_one();
    if let Some(path) = svg {
        std::fs::write(&path, witnesses_svg(scene, &svg_witnesses, 3))
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    verdict(&mut out, ok);
    Ok(Outcome::new(ok, out))
}

pub fn cmd_check(file: &PathBuf, order: Option<usize>) -> Outcome {
    let text = match read(file) {
        Ok(t) => t,
        Err(o) => return o,
    };
    let mu = match load(&text) {
        Ok(m) => m,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let up_to = order.unwrap_or(mu.order + 1);
    let v = check_relations(&mu, up_to);
    let mut out = String::new();
    let _ = writeln!(out, "field {}, order {}", mu.spec, mu.order);
    violations_summary(&mut out, &mu, &v, up_to);
    verdict(&mut out, v.is_empty());
    Outcome::new(v.is_empty(), out)
}
