//! Chart data model: spectral-sequence pages as plain serializable records
//! (Adams indexing, one entry per nonzero cell) and the q-Legendre
//! stacked-bar figure. Rendering to SVG/text lives in the CLI; this module
//! only owns the data and its deterministic JSON form.

use serde::{Deserialize, Serialize};

use crate::gold::AtomProduct;
use crate::mackey::MackeyDescriptor;

pub const CHART_SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MackeyJson {
    pub kind: String,
    pub params: Vec<i64>,
}

impl From<&MackeyDescriptor> for MackeyJson {
    fn from(d: &MackeyDescriptor) -> Self {
        let (kind, params) = d.kind_params();
        MackeyJson {
            kind: kind.to_string(),
            params,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartEntry {
    pub x: i64,
    pub y: i64,
    pub mackey: MackeyJson,
    pub hieroglyph: String,
    pub color_level: u32,
}

/// A page of the regular slice spectral sequence in Adams indexing:
/// the entry for E_2^{s, alpha+t} sits at (alpha+t-s, s).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartPage {
    pub schema_version: String,
    pub p: u64,
    pub ring_kind: String,
    pub page: String,
    pub entries: Vec<ChartEntry>,
}

impl ChartPage {
    pub fn new(p: u64, ring_kind: &str, page: &str) -> Self {
        ChartPage {
            schema_version: CHART_SCHEMA_VERSION.to_string(),
            p,
            ring_kind: ring_kind.to_string(),
            page: page.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, x: i64, y: i64, desc: &MackeyDescriptor) {
        if desc.is_zero() {
            return;
        }
        self.entries.push(ChartEntry {
            x,
            y,
            mackey: desc.into(),
            hieroglyph: hieroglyph(desc),
            color_level: desc.color_level(),
        });
    }

    /// Entries sorted by (x, y); part of the byte-reproducibility contract.
    pub fn sort_entries(&mut self) {
        self.entries.sort_by_key(|e| (e.x, e.y));
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("chart serialization")
    }
}

/// Stable ASCII identifier for the spectral-sequence hieroglyphs: "box_k"
/// for a /`[p^k]_A` quotient, "tr_d" for a transfer truncation d steps above
/// the geometric level, "witt" for the full Witt Mackey functor.
pub fn hieroglyph(desc: &MackeyDescriptor) -> String {
    match desc {
        MackeyDescriptor::Zero => "zero".to_string(),
        MackeyDescriptor::W => "witt".to_string(),
        MackeyDescriptor::ConstR => "box_1".to_string(),
        MackeyDescriptor::TrW(r) => format!("trW_{r}"),
        MackeyDescriptor::PhiW(_) => "box_inf".to_string(),
        MackeyDescriptor::TrPhi { tr, phi } => format!("tr_{}", tr - phi),
        MackeyDescriptor::Quotient(_, d) => format!("box_{}", d.crystalline_valuation()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreColumn {
    pub n: u64,
    /// (atom level r, count): count = exponent of xi_r in `[n]_A!`.
    pub bars: Vec<(u32, u64)>,
    pub total: u64,
}

/// The q-Legendre figure: column n stacks the atom exponents of `[n]_A!`;
/// the total height is the classical Legendre valuation of n!.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreFigure {
    pub p: u64,
    pub n_max: u64,
    pub columns: Vec<LegendreColumn>,
}

pub fn legendre_figure(p: u64, n_max: u64) -> LegendreFigure {
    let columns = (1..=n_max)
        .map(|n| {
            let atoms = AtomProduct::qa_factorial(p, n);
            let bars: Vec<(u32, u64)> = atoms.xi_exps().map(|(j, e)| (j, e as u64)).collect();
            let total = bars.iter().map(|&(_, e)| e).sum();
            LegendreColumn { n, bars, total }
        })
        .collect();
    LegendreFigure { p, n_max, columns }
}
