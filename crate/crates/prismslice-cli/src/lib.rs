//! Command implementations and renderers for the prismslice CLI: the
//! q-Legendre figure, RSSS chart pages (JSON/SVG/text), the slice
//! filtration table, the prism verification report, and Witt-vector
//! arithmetic over small bases.
//!
//! Every command is deterministic given its flags. Exit codes: 0 = pass,
//! 1 = verification failure, 2 = usage error.

use prismslice::chart::{legendre_figure, ChartPage, LegendreFigure};
use prismslice::gold::AtomProduct;
use prismslice::prism::{
    borger_norm_lift, corollary_congruence, extended_units, near_multiplicativity_check,
    norm_lift_check, q_legendre_check, q_pochhammer, sharper_base_congruence, verify_congruence,
    warning_identity_check, LiftCandidate, Prism, PrismKind,
};
use prismslice::slice::{e2_page, einf_page, filtration_gen_even, filtration_gen_lambda, RingKind};
use prismslice::witt::{FpxRing, WittRing, WittVector, ZModRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of a command: rendered output plus the process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) => m,
        }
    }
}

pub type CliResult = Result<String, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// All commands work at a prime p; reject composites and absurd sizes
/// before the library asserts.
fn validate_prime(p: u64) -> Result<(), CliError> {
    if p < 2 {
        return Err(usage("--p must be a prime (at least 2)"));
    }
    if p > 1 << 20 {
        return Err(usage("--p is unreasonably large"));
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return Err(usage(format!("--p must be prime; {p} = {d} * {}", p / d)));
        }
        d += 1;
    }
    Ok(())
}

/// Default precision (N, M), honoring PRISMSLICE_PRECISION="N,M".
pub fn default_precision() -> (u32, u32) {
    if let Ok(v) = std::env::var("PRISMSLICE_PRECISION") {
        if let Some((n, m)) = v.split_once(',') {
            if let (Ok(n), Ok(m)) = (n.trim().parse(), m.trim().parse()) {
                return (n, m);
            }
        }
    }
    (48, 24)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Svg,
    Txt,
    Json,
}

pub const PALETTE: [&str; 8] = [
    "#FF0000", "#FF8000", "#DDCC00", "#009933", "#0066FF", "#9933CC", "#FD56BD", "#884400",
];

fn color(level: u32) -> &'static str {
    PALETTE[(level as usize) % PALETTE.len()]
}

// ---------------------------------------------------------------- legendre

pub fn cmd_legendre(p: u64, n_max: u64, format: Format) -> CliResult {
    validate_prime(p)?;
    if n_max < 1 {
        return Err(usage("--n-max must be at least 1"));
    }
    if n_max > 100_000 {
        return Err(usage("--n-max is capped at 100000"));
    }
    let fig = legendre_figure(p, n_max);
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&fig).expect("figure serialization"),
        Format::Txt => render_legendre_txt(&fig),
        Format::Svg => render_legendre_svg(&fig),
    })
}

/// Glyph of the bar cell at stack height h (0-based from the bottom) in
/// column n, if any: bars stack by increasing atom level.
fn bar_glyph_at(col: &prismslice::chart::LegendreColumn, h: u64) -> Option<u32> {
    let mut base = 0;
    for &(level, count) in &col.bars {
        if h < base + count {
            return Some(level);
        }
        base += count;
    }
    None
}

fn render_legendre_txt(fig: &LegendreFigure) -> String {
    let height = fig.columns.iter().map(|c| c.total).max().unwrap_or(0);
    let mut out = String::new();
    out.push_str(&format!("q-Legendre figure, p = {}\n", fig.p));
    for h in (0..height).rev() {
        let mut line = String::new();
        for col in &fig.columns {
            match bar_glyph_at(col, h) {
                Some(level) => line.push_str(&format!("{:>2}", level)),
                None => line.push_str("  "),
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&"-".repeat(2 * fig.columns.len()));
    out.push('\n');
    for col in &fig.columns {
        out.push_str(&format!("{:>2}", col.n % 100 / 10));
    }
    out.push('\n');
    for col in &fig.columns {
        out.push_str(&format!("{:>2}", col.n % 10));
    }
    out.push('\n');
    out.push_str("cell glyph = atom level r of xi_r = phi^r([p]_A); total height of column n is v_p(n!)\n");
    out
}

fn render_legendre_svg(fig: &LegendreFigure) -> String {
    let bar_w = 14;
    let cell_h = 14;
    let height = fig.columns.iter().map(|c| c.total).max().unwrap_or(0) as i64;
    let width = fig.columns.len() as i64 * (bar_w + 4) + 40;
    let total_h = height * cell_h + 60;
    let mut s = format!(
        r#"<svg version="1.1" width="{width}" height="{total_h}" xmlns="http://www.w3.org/2000/svg">"#
    );
    s.push('\n');
    s.push_str(&format!(
        r#"<text x="8" y="16" font-family="monospace" font-size="12">q-Legendre figure, p = {}</text>"#,
        fig.p
    ));
    s.push('\n');
    for (ci, col) in fig.columns.iter().enumerate() {
        let x = 20 + ci as i64 * (bar_w + 4);
        let mut base = 0i64;
        for &(level, count) in &col.bars {
            for k in 0..count as i64 {
                let y = 30 + (height - 1 - (base + k)) * cell_h;
                s.push_str(&format!(
                    r#"<rect x="{x}" y="{y}" width="{bar_w}" height="{cell_h}" fill="{}" stroke="white"/>"#,
                    color(level + 1)
                ));
                s.push('\n');
            }
            base += count as i64;
        }
        s.push_str(&format!(
            r#"<text x="{}" y="{}" font-family="monospace" font-size="9" text-anchor="middle">{}</text>"#,
            x + bar_w / 2,
            30 + height * cell_h + 12,
            col.n
        ));
        s.push('\n');
    }
    s.push_str("</svg>\n");
    s
}

// ---------------------------------------------------------------- rsss

pub fn cmd_rsss(
    p: u64,
    ring: RingKind,
    page: &str,
    max_col: i64,
    max_row: i64,
    format: Format,
) -> CliResult {
    validate_prime(p)?;
    if max_col < 0 || max_row < 0 {
        return Err(usage("--max-col and --max-row must be nonnegative"));
    }
    if max_col > 2000 || max_row > 2000 {
        return Err(usage("--max-col and --max-row are capped at 2000"));
    }
    let chart = match page {
        "e2" => e2_page(p, ring, max_col, max_row),
        "einf" => {
            if ring == RingKind::Torsionfree {
                return Err(usage(
                    "the Einfinity page is only computed for perfect F_p-algebras (--ring fp)",
                ));
            }
            einf_page(p, max_col, max_row)
        }
        other => return Err(usage(format!("unknown page '{other}'"))),
    };
    Ok(match format {
        Format::Json => chart.to_json_string(),
        Format::Txt => render_chart_txt(&chart, max_col, max_row),
        Format::Svg => render_chart_svg(&chart, max_col, max_row),
    })
}

fn cell_symbol(e: &prismslice::chart::ChartEntry) -> String {
    match e.mackey.kind.as_str() {
        "W" => "W".to_string(),
        "constR" => "1".to_string(),
        "quotient" => e
            .hieroglyph
            .strip_prefix("box_")
            .unwrap_or("?")
            .to_string(),
        "trPhi" => "t".to_string(),
        "trW" => "T".to_string(),
        _ => "?".to_string(),
    }
}

fn render_chart_txt(chart: &ChartPage, max_col: i64, max_row: i64) -> String {
    let mut out = format!(
        "RSSS {} page, p = {}, ring = {}\n",
        chart.page, chart.p, chart.ring_kind
    );
    for y in (0..=max_row).rev() {
        let mut line = format!("{y:>3} |");
        for x in 0..=max_col {
            let sym = chart
                .entries
                .iter()
                .find(|e| e.x == x && e.y == y)
                .map(cell_symbol)
                .unwrap_or_else(|| ".".to_string());
            line.push_str(&format!("{sym:>3}"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str(&format!("    +{}\n     ", "-".repeat(3 * (max_col as usize + 1))));
    for x in 0..=max_col {
        out.push_str(&format!("{x:>3}"));
    }
    out.push('\n');
    out.push_str("W = Witt functor, 1 = constant R, digits k = quotient by [p^k], t = transfer-truncated\n");
    out
}

fn render_chart_svg(chart: &ChartPage, max_col: i64, max_row: i64) -> String {
    let cell = 26i64;
    let ox = 40i64;
    let oy = 30i64;
    let width = ox + (max_col + 1) * cell + 160;
    let height = oy + (max_row + 1) * cell + 40;
    let mut s = format!(
        r#"<svg version="1.1" width="{width}" height="{height}" xmlns="http://www.w3.org/2000/svg">"#
    );
    s.push('\n');
    s.push_str(&format!(
        r#"<text x="8" y="16" font-family="monospace" font-size="12">RSSS {} page, p = {}, ring = {}</text>"#,
        chart.page, chart.p, chart.ring_kind
    ));
    s.push('\n');
    for x in 0..=max_col {
        for y in 0..=max_row {
            let px = ox + x * cell;
            let py = oy + (max_row - y) * cell;
            s.push_str(&format!(
                r##"<rect x="{px}" y="{py}" width="{cell}" height="{cell}" fill="none" stroke="#dddddd"/>"##
            ));
            s.push('\n');
        }
    }
    for e in &chart.entries {
        if e.x > max_col || e.y > max_row {
            continue;
        }
        let px = ox + e.x * cell + cell / 2;
        let py = oy + (max_row - e.y) * cell + cell / 2 + 4;
        s.push_str(&format!(
            r#"<text x="{px}" y="{py}" font-family="monospace" font-size="12" text-anchor="middle" fill="{}">{}</text>"#,
            color(e.color_level),
            cell_symbol(e)
        ));
        s.push('\n');
    }
    // vanishing-line color legend
    let legend_x = ox + (max_col + 1) * cell + 10;
    let labels = ["W", "Phi^e W", "Phi^Cp W", "Phi^Cp2 W", "Phi^Cp3 W"];
    for (i, lab) in labels.iter().enumerate() {
        s.push_str(&format!(
            r#"<text x="{legend_x}" y="{}" font-family="monospace" font-size="11" fill="{}">{lab}</text>"#,
            oy + 14 + 16 * i as i64,
            color(i as u32)
        ));
        s.push('\n');
    }
    s.push_str("</svg>\n");
    s
}

// ------------------------------------------------------- slice filtration

fn atom_expression(a: &AtomProduct) -> String {
    if a.is_one() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    if a.exp_p != 0 {
        parts.push(if a.exp_p == 1 {
            "p".to_string()
        } else {
            format!("p^{}", a.exp_p)
        });
    }
    for (j, e) in a.xi_exps() {
        parts.push(if e == 1 {
            format!("xi_{j}")
        } else {
            format!("xi_{j}^{e}")
        });
    }
    parts.join(" ")
}

pub fn cmd_slice_filtration(p: u64, i: u64, j_max: i64, grading: &str) -> CliResult {
    validate_prime(p)?;
    if i < 1 {
        return Err(usage("--i must be at least 1"));
    }
    if i > 10_000 || j_max > 10_000 {
        return Err(usage("--i and --j-max are capped at 10000"));
    }
    let gen = |j: i64| -> AtomProduct {
        match grading {
            "lambda" => filtration_gen_lambda(p, i, j),
            _ => filtration_gen_even(p, i, j),
        }
    };
    if !matches!(grading, "lambda" | "even") {
        return Err(usage(format!("unknown grading '{grading}'")));
    }
    let mut out = format!(
        "slice filtration generators of pi_{} TF at p = {}\n",
        match grading {
            "lambda" => format!("[{i}]_lambda"),
            _ => format!("{}", 2 * i),
        },
        p
    );
    out.push_str("   j  valuation  generator\n");
    if j_max < 1 {
        out.push_str("   -          -  full (j <= 0)\n");
        return Ok(out);
    }
    out.push_str("   0          0  full (j <= 0)\n");
    for j in 1..=j_max {
        let g = gen(j);
        out.push_str(&format!(
            "{j:>4} {:>10}  {}\n",
            g.crystalline_valuation(),
            atom_expression(&g)
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------- prism verify

#[derive(Debug, Clone)]
pub struct PrismVerifyOptions {
    pub model: String,
    pub p: u64,
    pub depth: u32,
    pub imax: u32,
    pub jmax: u32,
    pub prec_n: Option<u32>,
    pub prec_m: Option<u32>,
}

fn xi_degree(kind: PrismKind, p: u64, j: u32) -> u64 {
    match kind {
        PrismKind::QCrystalline => (p - 1) * p.pow(j),
        PrismKind::PerfectQ { depth } => (p - 1) * p.pow(depth - 1 + j),
        PrismKind::Kisin => p.pow(j),
        PrismKind::Crystalline => 0,
    }
}

/// Degree bound of u_{i,j} built by the unit-table recursion.
fn unit_degree(kind: PrismKind, p: u64, i: u32, j: u32) -> u64 {
    let du11 = p * xi_degree(kind, p, 0);
    let mut diag = du11;
    for l in 1..i {
        diag = ((p - 1) * diag + xi_degree(kind, p, l)).max(p.pow(l) * du11);
    }
    let mut d = diag;
    for l in i..j {
        d = (p * d).max(p.pow(l) * du11);
    }
    d
}

/// Minimal t-window so every dividend in the verification sweep is an
/// honest polynomial inside it.
fn required_prec_n(kind: PrismKind, p: u64, imax: u32, jmax: u32) -> u32 {
    let mut need = 8u64;
    for i in 1..=imax {
        for j in i..=jmax {
            need = need
                .max(xi_degree(kind, p, j) + 2)
                .max(unit_degree(kind, p, i, j) + 2);
        }
    }
    // norm-lift numerators u_{n,n} phi(x) - xi_n delta(x) with deg x <= 4
    for n in 1..=imax.min(2) {
        need = need.max(unit_degree(kind, p, n, n) + 4 * p + 2);
        need = need.max(xi_degree(kind, p, n + 1) + 4 * p + 2);
    }
    u32::try_from(need).unwrap_or(u32::MAX)
}

pub fn cmd_prism_verify(opts: &PrismVerifyOptions) -> CliResult {
    let kind = match opts.model.as_str() {
        "qcrys" => PrismKind::QCrystalline,
        "perfq" => {
            if opts.depth < 1 {
                return Err(usage("--model perfq needs --depth >= 1"));
            }
            PrismKind::PerfectQ { depth: opts.depth }
        }
        "crys" => PrismKind::Crystalline,
        "kisin" => PrismKind::Kisin,
        other => return Err(usage(format!("unknown model '{other}'"))),
    };
    validate_prime(opts.p)?;
    if opts.imax < 1 || opts.jmax < opts.imax {
        return Err(usage("need 1 <= imax <= jmax"));
    }
    if opts.jmax > 6 || opts.depth > 6 {
        return Err(usage("imax/jmax are capped at 6 and depth at 6 (window sizes explode beyond)"));
    }
    let (def_n, def_m) = default_precision();
    let prec_m = opts.prec_m.unwrap_or(def_m);
    if prec_m < 2 {
        return Err(usage("insufficient precision for delta: need --prec-m >= 2"));
    }
    let needed_n = required_prec_n(kind, opts.p, opts.imax, opts.jmax);
    let prec_n = match opts.prec_n {
        Some(n) if n < needed_n => {
            return Err(usage(format!(
                "--prec-n {n} is insufficient for this sweep (need at least {needed_n})"
            )))
        }
        Some(n) => n,
        None => needed_n.max(def_n),
    };
    let prism = Prism::new(kind, opts.p, prec_n, prec_m)
        .map_err(|e| usage(format!("cannot build model: {e}")))?;

    let mut checks: Vec<(String, bool)> = Vec::new();
    let push = |checks: &mut Vec<(String, bool)>, name: String, pass: bool| {
        checks.push((name, pass));
    };

    let cond = prism.prism_condition();
    push(&mut checks, "prism_condition".into(), cond.is_ok());
    if matches!(kind, PrismKind::QCrystalline) {
        let pass = match &cond {
            Ok(d) => d
                .sub(&prism.ring.one())
                .is_divisible_by(&prism.orientation)
                .unwrap_or(false),
            Err(_) => false,
        };
        push(&mut checks, "delta_unit_congruent_one".into(), pass);
    }

    let table = match extended_units(&prism, opts.imax, opts.jmax) {
        Ok(t) => t,
        Err(e) => {
            return Err(CliError::Verification(format!(
                "unit table construction failed: {e}"
            )))
        }
    };
    for i in 1..=opts.imax {
        for j in i..=opts.jmax {
            let pass = verify_congruence(&prism, &table, i, j).unwrap_or(false);
            push(&mut checks, format!("extended_congruence_{i}_{j}"), pass);
        }
    }
    push(
        &mut checks,
        "sharper_base_congruence".into(),
        sharper_base_congruence(&prism, &table).unwrap_or(false),
    );
    for i in 1..=opts.imax.min(3) {
        for j in i..=opts.jmax.min(3) {
            for r in i..=opts.jmax.min(3) {
                let pass = corollary_congruence(&prism, i, j, r).unwrap_or(false);
                push(&mut checks, format!("corollary_congruence_{i}_{j}_{r}"), pass);
            }
        }
    }

    let samples: Vec<prismslice::rings::Elem> = (0..4)
        .map(|s| prism.ring.from_coeffs(&[s + 2, 1, s % 3, s]))
        .collect();
    for n in 1..=opts.imax.min(2) {
        let mut pass = true;
        for x in &samples {
            match borger_norm_lift(&prism, &table, n, x) {
                Ok(cand) => {
                    if !norm_lift_check(&prism, n, &cand, x).unwrap_or(false) {
                        pass = false;
                    }
                }
                Err(_) => pass = false,
            }
        }
        push(&mut checks, format!("borger_norm_lift_n{n}"), pass);
        let nm = near_multiplicativity_check(&prism, &table, n, &samples[0], &samples[1])
            .unwrap_or(false);
        push(&mut checks, format!("near_multiplicativity_n{n}"), nm);
    }

    if let PrismKind::PerfectQ { .. } = kind {
        for n in 1..=opts.imax.min(2) {
            let mut pass = true;
            for (a, b) in [(1u64, 0u64), (2, 1)] {
                let x = prism.ring.q_pow(a);
                let y = prism.ring.q_pow(b);
                let cand =
                    LiftCandidate::plain(q_pochhammer(&prism.ring, &x, &y, n), &prism.ring);
                if !norm_lift_check(&prism, n, &cand, &x.sub(&y)).unwrap_or(false) {
                    pass = false;
                }
            }
            push(&mut checks, format!("q_pochhammer_norm_lift_n{n}"), pass);
        }
    }

    if matches!(kind, PrismKind::QCrystalline) {
        let mut pass = true;
        for n in 1..=20 {
            if !q_legendre_check(opts.p, n, 48, 24).unwrap_or(false) {
                pass = false;
            }
        }
        push(&mut checks, "q_legendre_sweep".into(), pass);
        let mut pass = true;
        for (a, b) in [(1u64, 0u64), (2, 1), (3, 2), (5, 1)] {
            if !warning_identity_check(a, b).unwrap_or(false) {
                pass = false;
            }
        }
        push(&mut checks, "warning_identity".into(), pass);
    }

    let all_pass = checks.iter().all(|(_, p)| *p);
    let delta_unit_json = cond
        .as_ref()
        .map(|d| d.to_json())
        .unwrap_or(serde_json::Value::Null);
    let report = serde_json::json!({
        "model": opts.model,
        "p": opts.p,
        "prec": [prec_n, prec_m],
        "delta_unit": delta_unit_json,
        "checks": checks
            .iter()
            .map(|(n, p)| serde_json::json!({"name": n, "pass": p}))
            .collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    let rendered = serde_json::to_string_pretty(&report).expect("report");
    if all_pass {
        Ok(rendered)
    } else {
        Err(CliError::Verification(rendered))
    }
}

// ------------------------------------------------------------------ witt

#[derive(Clone, Copy, Debug)]
pub enum WittBase {
    ZMod { p: u64, k: u32 },
    Fpx { p: u64, deg: usize },
}

pub fn parse_base(s: &str) -> Result<WittBase, CliError> {
    if let Some(rest) = s.strip_prefix("zmod:") {
        let (p, k) = rest
            .split_once('^')
            .ok_or_else(|| usage("expected zmod:p^k"))?;
        let p: u64 = p.parse().map_err(|_| usage("bad prime in base"))?;
        let k: u32 = k.parse().map_err(|_| usage("bad exponent in base"))?;
        validate_prime(p)?;
        if k < 1 {
            return Err(usage("zmod base needs k >= 1"));
        }
        if (p as u128).checked_pow(k).is_none_or(|m| m > u64::MAX as u128) {
            return Err(usage("zmod modulus p^k must fit 64 bits"));
        }
        return Ok(WittBase::ZMod { p, k });
    }
    if let Some(rest) = s.strip_prefix("fpx:") {
        let (p, d) = rest
            .split_once(',')
            .ok_or_else(|| usage("expected fpx:p,m"))?;
        let p: u64 = p.parse().map_err(|_| usage("bad prime in base"))?;
        let deg: usize = d.parse().map_err(|_| usage("bad degree in base"))?;
        validate_prime(p)?;
        if !(1..=64).contains(&deg) {
            return Err(usage("fpx base needs 1 <= m <= 64"));
        }
        return Ok(WittBase::Fpx { p, deg });
    }
    Err(usage("base must be zmod:p^k or fpx:p,m"))
}

fn parse_coords_zmod(s: &str, ring: &ZModRing) -> Result<Vec<u128>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i128>()
                .map(|v| v.rem_euclid(ring.modulus as i128) as u128)
                .map_err(|_| usage(format!("bad coordinate '{t}'")))
        })
        .collect()
}

fn parse_coords_fpx(s: &str, ring: &FpxRing) -> Result<Vec<Vec<u64>>, CliError> {
    s.split(';')
        .map(|poly| {
            let mut c: Vec<u64> = poly
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map(|v| v.rem_euclid(ring.p as i64) as u64)
                        .map_err(|_| usage(format!("bad coefficient '{t}'")))
                })
                .collect::<Result<_, _>>()?;
            c.resize(ring.deg, 0);
            Ok(c)
        })
        .collect()
}

fn fmt_zmod(v: &[u128]) -> String {
    format!(
        "({})",
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
    )
}

fn fmt_fpx(v: &[Vec<u64>]) -> String {
    let poly = |c: &Vec<u64>| {
        format!(
            "[{}]",
            c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        )
    };
    format!("({})", v.iter().map(poly).collect::<Vec<_>>().join(", "))
}

fn witt_err(e: prismslice::witt::WittError) -> CliError {
    CliError::Usage(format!("witt operation failed: {e}"))
}

pub fn cmd_witt(base: &str, op: &str, args: &[String]) -> CliResult {
    let base = parse_base(base)?;
    match base {
        WittBase::ZMod { p, k } => {
            let ring = ZModRing::new(p, k);
            let vecs: Vec<WittVector<ZModRing>> = args
                .iter()
                .map(|a| Ok(WittVector::new(ring, parse_coords_zmod(a, &ring)?)))
                .collect::<Result<_, CliError>>()?;
            run_witt_op(op, &vecs, &ring, fmt_zmod)
        }
        WittBase::Fpx { p, deg } => {
            let ring = FpxRing { p, deg };
            let vecs: Vec<WittVector<FpxRing>> = args
                .iter()
                .map(|a| Ok(WittVector::new(ring, parse_coords_fpx(a, &ring)?)))
                .collect::<Result<_, CliError>>()?;
            run_witt_op(op, &vecs, &ring, fmt_fpx)
        }
    }
}

fn run_witt_op<R: WittRing>(
    op: &str,
    vecs: &[WittVector<R>],
    ring: &R,
    fmt: impl Fn(&[R::Elem]) -> String,
) -> CliResult {
    let need = |k: usize| -> Result<(), CliError> {
        if vecs.len() != k {
            Err(usage(format!("'{op}' needs exactly {k} vector argument(s)")))
        } else {
            Ok(())
        }
    };
    match op {
        "add" | "mul" => {
            need(2)?;
            if vecs[0].len() != vecs[1].len() {
                return Err(usage("vectors must have equal length"));
            }
            let out = if op == "add" {
                vecs[0].add(&vecs[1])
            } else {
                vecs[0].mul(&vecs[1])
            }
            .map_err(witt_err)?;
            Ok(format!("{}\n", fmt(&out.coords)))
        }
        "ghost" => {
            need(1)?;
            Ok(format!("{}\n", fmt(&vecs[0].ghost())))
        }
        "norm" => {
            need(1)?;
            let out = vecs[0].norm().map_err(witt_err)?;
            Ok(format!("{}\n", fmt(&out.coords)))
        }
        "check" => {
            need(0)?;
            run_witt_suite(ring).map(|()| "witt invariant suite: all checks passed\n".to_string())
        }
        other => Err(usage(format!("unknown witt operation '{other}'"))),
    }
}

/// Deterministic random elements for the invariant suite.
fn sample<R: WittRing>(ring: &R, rng: &mut ChaCha8Rng, len: usize) -> WittVector<R> {
    let coords = (0..len)
        .map(|_| {
            let v = rng.gen_range(-50i64..50);
            ring.of_i64(v)
        })
        .collect();
    WittVector::new(ring.clone(), coords)
}

/// The Witt invariant suite on a chosen base: ring axioms, F V = p,
/// Teichmuller multiplicativity, norm multiplicativity, Frobenius
/// reciprocity; all on seeded samples.
pub fn run_witt_suite<R: WittRing>(ring: &R) -> Result<(), CliError> {
    let fail = |name: &str| CliError::Verification(format!("witt invariant failed: {name}"));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let p = ring.p();
    for _ in 0..40 {
        let x = sample(ring, &mut rng, 2);
        let y = sample(ring, &mut rng, 2);
        let z = sample(ring, &mut rng, 2);
        let e = |r: Result<WittVector<R>, _>| r.map_err(|_: prismslice::witt::WittError| fail("op"));
        // commutativity, associativity, distributivity
        if !e(x.add(&y))?.eq(&e(y.add(&x))?) {
            return Err(fail("add commutativity"));
        }
        if !e(x.mul(&y))?.eq(&e(y.mul(&x))?) {
            return Err(fail("mul commutativity"));
        }
        if !e(e(x.add(&y))?.add(&z))?.eq(&e(x.add(&e(y.add(&z))?))?) {
            return Err(fail("add associativity"));
        }
        if !e(e(x.mul(&y))?.mul(&z))?.eq(&e(x.mul(&e(y.mul(&z))?))?) {
            return Err(fail("mul associativity"));
        }
        if !e(x.mul(&e(y.add(&z))?))?.eq(&e(e(x.mul(&y))?.add(&e(x.mul(&z))?))?) {
            return Err(fail("distributivity"));
        }
        // F(V(x)) = p x
        let fv = x
            .verschiebung_v()
            .frobenius_f()
            .map_err(|_| fail("F after V"))?;
        if !fv.eq(&x.int_mul(p).map_err(|_| fail("int_mul"))?) {
            return Err(fail("F V = p"));
        }
        // norm multiplicativity
        let nx = x.norm().map_err(|_| fail("norm"))?;
        let ny = y.norm().map_err(|_| fail("norm"))?;
        let nxy = x.mul(&y).and_then(|v| v.norm()).map_err(|_| fail("norm"))?;
        if !nxy.eq(&nx.mul(&ny).map_err(|_| fail("norm product"))?) {
            return Err(fail("norm multiplicativity"));
        }
        // Frobenius reciprocity V(x) y3 = V(x F(y3))
        let y3 = sample(ring, &mut rng, 3);
        let lhs = x.verschiebung_v().mul(&y3).map_err(|_| fail("recip"))?;
        let rhs = x
            .mul(&y3.frobenius_f().map_err(|_| fail("recip"))?)
            .map_err(|_| fail("recip"))?
            .verschiebung_v();
        if !lhs.eq(&rhs) {
            return Err(fail("frobenius reciprocity"));
        }
    }
    // Teichmuller multiplicativity
    for _ in 0..20 {
        let a = sample(ring, &mut rng, 1).coords[0].clone();
        let b = sample(ring, &mut rng, 1).coords[0].clone();
        let ta = WittVector::teichmuller(ring.clone(), a.clone(), 3);
        let tb = WittVector::teichmuller(ring.clone(), b.clone(), 3);
        let tab = WittVector::teichmuller(ring.clone(), ring.mul(&a, &b), 3);
        if !ta.mul(&tb).map_err(|_| fail("teich"))?.eq(&tab) {
            return Err(fail("teichmuller multiplicativity"));
        }
    }
    Ok(())
}

// --------------------------------------------------- chart JSON validation

/// Structural validation against the shipped chart schema (required keys,
/// types, enums); returns the first violation.
pub fn validate_chart_json(v: &serde_json::Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("chart must be an object")?;
    for key in ["schema_version", "p", "ring_kind", "page", "entries"] {
        if !obj.contains_key(key) {
            return Err(format!("missing key '{key}'"));
        }
    }
    if obj.len() != 5 {
        return Err("unexpected extra keys".into());
    }
    if obj["schema_version"] != "1" {
        return Err("schema_version must be \"1\"".into());
    }
    if !obj["p"].is_u64() || obj["p"].as_u64().unwrap() < 2 {
        return Err("p must be an integer >= 2".into());
    }
    match obj["ring_kind"].as_str() {
        Some("torsionfree") | Some("fp") => {}
        _ => return Err("ring_kind must be torsionfree|fp".into()),
    }
    match obj["page"].as_str() {
        Some("e2") | Some("einf") => {}
        _ => return Err("page must be e2|einf".into()),
    }
    let entries = obj["entries"].as_array().ok_or("entries must be an array")?;
    let kinds = ["zero", "W", "trW", "phiW", "constR", "trPhi", "quotient"];
    for e in entries {
        let eo = e.as_object().ok_or("entry must be an object")?;
        for key in ["x", "y", "mackey", "hieroglyph", "color_level"] {
            if !eo.contains_key(key) {
                return Err(format!("entry missing '{key}'"));
            }
        }
        if !eo["x"].is_i64() || !eo["y"].is_i64() {
            return Err("x and y must be integers".into());
        }
        let mk = eo["mackey"].as_object().ok_or("mackey must be an object")?;
        let kind = mk
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or("mackey.kind must be a string")?;
        if !kinds.contains(&kind) {
            return Err(format!("unknown mackey kind '{kind}'"));
        }
        let params = mk
            .get("params")
            .and_then(|p| p.as_array())
            .ok_or("mackey.params must be an array")?;
        if !params.iter().all(|p| p.is_i64() || p.is_u64()) {
            return Err("mackey.params must be integers".into());
        }
        if !eo["hieroglyph"].is_string() {
            return Err("hieroglyph must be a string".into());
        }
        if !eo["color_level"].is_u64() {
            return Err("color_level must be a nonnegative integer".into());
        }
    }
    Ok(())
}
