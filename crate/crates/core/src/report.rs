//! Commands over a parsed spec, with JSON, DOT and plain-text output.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::comult::{monoid_check, verify_naturality, MonoidReport, NaturalityCertificate, DEFAULT_TRIANGLE_CAP};
use crate::diagram::{build_heegaard, wind_for_admissibility, Diagram, Family, Half, DEFAULT_WINDING_BUDGET};
use crate::domain::{enumerate_generators, is_weakly_admissible, spin_c_classes, Domain};
use crate::dsl::{NamedWord, OpenBookSpec};
use crate::floer::{compute, PipelineOptions, DEFAULT_NICE_BUDGET};
use crate::page::{MappingClassWord, Page};
use crate::{Error, Result};

pub const SCHEMA: &str = "openbook/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Build,
    Admissibility,
    Homology,
    Contact,
    Comult { g: String, h: String },
    Monoid { words: Vec<String> },
    ExportJson,
    ExportDot,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Build => "build".into(),
            Command::Admissibility => "admissibility".into(),
            Command::Homology => "homology".into(),
            Command::Contact => "contact".into(),
            Command::Comult { g, h } => format!("comult {g} {h}"),
            Command::Monoid { words } => format!("monoid {}", words.join(" ")),
            Command::ExportJson => "export-json".into(),
            Command::ExportDot => "export-dot".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SeedOrder {
    #[default]
    Lex,
    Input,
}

#[derive(Clone, Debug)]
pub struct Flags {
    pub cap: i64,
    pub winding_budget: usize,
    pub nice_budget: usize,
    pub seed_order: SeedOrder,
    /// Word for single-monodromy commands; the first word of the spec if unset.
    pub word: Option<String>,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            cap: DEFAULT_TRIANGLE_CAP,
            winding_budget: DEFAULT_WINDING_BUDGET,
            nice_budget: DEFAULT_NICE_BUDGET,
            seed_order: SeedOrder::Lex,
            word: None,
        }
    }
}

impl Flags {
    fn pipeline(&self) -> PipelineOptions {
        PipelineOptions { winding_budget: self.winding_budget, nice_budget: self.nice_budget }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramStats {
    pub genus: usize,
    pub crossings: usize,
    pub regions: usize,
    pub generators_per_class: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub periodic_rank: usize,
    /// A periodic domain with only nonnegative coefficients, when one exists.
    pub witness: Option<Domain>,
    pub admissible_after_winding: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub rank: usize,
    pub class_ranks: Vec<usize>,
    pub generators: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub page: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<AdmissibilityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact_nonzero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<NaturalityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monoid: Option<MonoidReport>,
    pub ok: bool,
    pub verdict: String,
}

/// What a command produced: the text to print and the process exit code.
#[derive(Clone, Debug)]
pub struct Output {
    pub report: Option<Report>,
    pub body: String,
    pub exit_code: i32,
}

fn stats(d: &Diagram) -> DiagramStats {
    let pair = [Family::Alpha, Family::Beta];
    let gens = enumerate_generators(d, pair);
    DiagramStats {
        genus: d.closed_genus(),
        crossings: d.crossings.len(),
        regions: d.regions.len(),
        generators_per_class: spin_c_classes(d, pair, &gens).iter().map(Vec::len).collect(),
    }
}

fn selected_word(spec: &OpenBookSpec, flags: &Flags) -> Result<(String, NamedWord)> {
    match &flags.word {
        Some(n) => Ok((n.clone(), spec.named_word(n)?.clone())),
        None => Ok(spec.words.first().cloned().unwrap_or_else(|| ("id".into(), NamedWord::default()))),
    }
}

fn word_by_name(spec: &OpenBookSpec, page: &Page, name: &str) -> Result<MappingClassWord> {
    if name == "id" && spec.named_word("id").is_err() {
        return Ok(MappingClassWord::identity());
    }
    spec.word(page, name)
}

pub fn run_command(cmd: &Command, spec: &OpenBookSpec, flags: &Flags) -> Result<Output> {
    let page = spec.page()?;
    let mut report = Report {
        schema: SCHEMA,
        command: cmd.name(),
        page: [spec.genus, spec.boundary],
        word: None,
        diagram: None,
        admissibility: None,
        homology: None,
        contact_nonzero: None,
        certificate: None,
        monoid: None,
        ok: true,
        verdict: String::new(),
    };
    match cmd {
        Command::ExportJson | Command::ExportDot => {
            let (_, w) = selected_word(spec, flags)?;
            let d = build_heegaard(&page, &spec.resolve(&page, &w)?)?;
            let body = if *cmd == Command::ExportJson { export_json(&d) } else { export_dot(&d) };
            return Ok(Output { report: None, body, exit_code: 0 });
        }
        Command::Build | Command::Admissibility | Command::Homology | Command::Contact => {
            let (name, w) = selected_word(spec, flags)?;
            let g = spec.resolve(&page, &w)?;
            report.word = Some(format!("{name} = {w}"));
            let d = build_heegaard(&page, &g)?;
            report.diagram = Some(stats(&d));
            match cmd {
                Command::Build => report.verdict = "built".into(),
                Command::Admissibility => {
                    let a = is_weakly_admissible(&d);
                    let wound = wind_for_admissibility(&d, flags.winding_budget).map(|x| is_weakly_admissible(&x).admissible);
                    let after = matches!(wound, Ok(true));
                    report.ok = after;
                    report.verdict = if after { "weakly admissible".into() } else { "not weakly admissible".into() };
                    report.admissibility = Some(AdmissibilityReport { admissible: a.admissible, periodic_rank: a.rank, witness: a.witness, admissible_after_winding: after });
                }
                _ => {
                    let r = compute(&page, &g, &flags.pipeline())?;
                    report.diagram = Some(stats(&r.diagram));
                    report.homology = Some(HomologyReport { rank: r.rank, class_ranks: r.class_ranks.clone(), generators: r.complex.generators.len() });
                    if *cmd == Command::Contact {
                        report.contact_nonzero = Some(r.contact_nonzero);
                        report.verdict = if r.contact_nonzero { "nonzero over GF(2)".into() } else { "zero over GF(2)".into() };
                    } else {
                        report.verdict = format!("rank {}", r.rank);
                    }
                }
            }
        }
        Command::Comult { g, h } => {
            let (gw, hw) = (word_by_name(spec, &page, g)?, word_by_name(spec, &page, h)?);
            match verify_naturality(&page, &gw, &hw, flags.cap) {
                Ok(c) => {
                    report.certificate = Some(c);
                    report.verdict = "certificate OK".into();
                }
                Err(Error::NaturalityCheckFailed(m)) => {
                    report.ok = false;
                    report.verdict = format!("certificate FAILED: {m}");
                }
                Err(e) => return Err(e),
            }
        }
        Command::Monoid { words } => {
            let mut names: Vec<String> = if words.is_empty() { spec.words.iter().map(|(n, _)| n.clone()).collect() } else { words.clone() };
            if flags.seed_order == SeedOrder::Lex {
                names = names.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            }
            let ws: Vec<MappingClassWord> = names.iter().map(|n| word_by_name(spec, &page, n)).collect::<Result<_>>()?;
            let mut m = monoid_check(&page, &ws, &flags.pipeline());
            for e in &mut m.entries {
                if let (Some(i), Some(j)) = (ws.iter().position(|w| w.to_string() == e.g), ws.iter().position(|w| w.to_string() == e.h)) {
                    e.g = names[i].clone();
                    e.h = names[j].clone();
                }
            }
            report.ok = m.violations == 0;
            report.verdict = format!("{} pairs, {} violations", m.entries.len(), m.violations);
            report.monoid = Some(m);
        }
    }
    let exit_code = if report.ok { 0 } else { 1 };
    let body = render_text(&report);
    Ok(Output { report: Some(report), body, exit_code })
}

/// Deterministic JSON.
pub fn to_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("report serializes") + "\n"
}

pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    writeln!(s, "command: {}", r.command).unwrap();
    writeln!(s, "page: genus {}, {} boundary component(s)", r.page[0], r.page[1]).unwrap();
    if let Some(w) = &r.word {
        writeln!(s, "word: {w}").unwrap();
    }
    if let Some(d) = &r.diagram {
        writeln!(s, "diagram: genus {}, {} crossings, {} regions, generators per class {:?}", d.genus, d.crossings, d.regions, d.generators_per_class).unwrap();
    }
    if let Some(a) = &r.admissibility {
        writeln!(s, "periodic rank: {}", a.periodic_rank).unwrap();
        if let Some(w) = &a.witness {
            writeln!(s, "nonnegative periodic domain: {w:?}").unwrap();
        }
        writeln!(s, "admissible as built: {}; after winding: {}", a.admissible, a.admissible_after_winding).unwrap();
    }
    if let Some(h) = &r.homology {
        writeln!(s, "HF-hat rank over GF(2): {} from {} generators, per class {:?}", h.rank, h.generators, h.class_ranks).unwrap();
    }
    if let Some(c) = &r.certificate {
        writeln!(s, "x_g = {:?}, x_h = {:?}, x_hg = {:?}", c.x_g, c.x_h, c.x_hg).unwrap();
        writeln!(s, "checks: {}", c.checks.join(", ")).unwrap();
    }
    if let Some(m) = &r.monoid {
        let show = |b: Option<bool>| match b {
            Some(true) => "nonzero",
            Some(false) => "zero",
            None => "error",
        };
        for e in &m.entries {
            write!(s, "  g={} h={}: c(g) {}, c(h) {}, c(hg) {}", e.g, e.h, show(e.c_g), show(e.c_h), show(e.c_hg)).unwrap();
            if e.violation {
                write!(s, "  VIOLATION").unwrap();
            }
            if let Some(err) = &e.error {
                write!(s, "  ({err})").unwrap();
            }
            writeln!(s).unwrap();
        }
    }
    writeln!(s, "verdict: {}", r.verdict).unwrap();
    s
}

#[derive(Serialize)]
struct CurveExport {
    name: String,
    top: String,
    bottom: String,
}

#[derive(Serialize)]
struct CrossingExport {
    half: &'static str,
    curves: [String; 2],
    corners: Vec<usize>,
}

#[derive(Serialize)]
struct RegionExport {
    euler_quarters: i64,
    corners: usize,
}

#[derive(Serialize)]
struct DiagramExport {
    schema: &'static str,
    genus: usize,
    z: usize,
    curves: Vec<CurveExport>,
    crossings: Vec<CrossingExport>,
    regions: Vec<RegionExport>,
    adjacency: Vec<[usize; 2]>,
}

fn curve_name(d: &Diagram, c: usize) -> String {
    format!("{}{}", d.curves[c].family.symbol(), d.curves[c].index)
}

fn adjacency(d: &Diagram) -> Vec<[usize; 2]> {
    let set: BTreeSet<[usize; 2]> = d.segments.iter().filter(|s| s.left != s.right).map(|s| [s.left.min(s.right), s.left.max(s.right)]).collect();
    set.into_iter().collect()
}

pub fn export_json(d: &Diagram) -> String {
    let e = DiagramExport {
        schema: SCHEMA,
        genus: d.closed_genus(),
        z: d.z,
        curves: (0..d.curves.len())
            .map(|c| CurveExport { name: curve_name(d, c), top: d.curves[c].top.to_string(), bottom: d.curves[c].bottom.to_string() })
            .collect(),
        crossings: d
            .crossings
            .iter()
            .map(|x| CrossingExport {
                half: if x.half == Half::Top { "top" } else { "bottom" },
                curves: [curve_name(d, x.curves[0]), curve_name(d, x.curves[1])],
                corners: x.corners.iter().map(|k| k.region).collect(),
            })
            .collect(),
        regions: d.regions.iter().map(|r| RegionExport { euler_quarters: r.euler_q, corners: r.corners }).collect(),
        adjacency: adjacency(d),
    };
    serde_json::to_string_pretty(&e).expect("diagram serializes") + "\n"
}

/// Region adjacency graph, with the basepoint region filled.
pub fn export_dot(d: &Diagram) -> String {
    let mut s = String::from("graph regions {\n");
    for (i, r) in d.regions.iter().enumerate() {
        let style = if i == d.z { ", style=filled, fillcolor=gold" } else { "" };
        writeln!(s, "  r{i} [label=\"R{i}\\nchi={} corners={}\"{style}];", r.euler_characteristic(), r.corners).unwrap();
    }
    for [a, b] in adjacency(d) {
        writeln!(s, "  r{a} -- r{b};").unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;

    #[test]
    fn contact_on_positive_twist() {
        let spec = parse_spec("page 0 2; word g = t(core)^1;").unwrap();
        let out = run_command(&Command::Contact, &spec, &Flags::default()).unwrap();
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.report.unwrap().verdict, "nonzero over GF(2)");
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = parse_spec("page 1 1; word g = t(p)^1 t(q)^1; word h = t(q)^1;").unwrap();
        let cmd = Command::Comult { g: "g".into(), h: "h".into() };
        let a = to_json(&run_command(&cmd, &spec, &Flags::default()).unwrap().report.unwrap());
        let b = to_json(&run_command(&cmd, &spec, &Flags::default()).unwrap().report.unwrap());
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"openbook/1\""));
    }

    #[test]
    fn dot_highlights_basepoint_region() {
        let spec = parse_spec("page 0 2; word g = t(core)^2;").unwrap();
        let out = run_command(&Command::ExportDot, &spec, &Flags::default()).unwrap();
        assert_eq!(out.body.matches("fillcolor").count(), 1);
        assert!(out.body.starts_with("graph regions {"));
    }
}
