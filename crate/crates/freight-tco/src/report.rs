//! Output writers: aligned text tables, comma-delimited records and JSON.
//!
//! Tables and delimited records round $/mile values to 4 decimals and
//! whole-life dollars to whole dollars. JSON keeps full precision.

use serde::Serialize;

use crate::engine::{
    BreakevenResponse, InfraTcoResponse, ProjectResponse, ScheduleResponse, SensitivityResponse, SystemTcoResponse,
    VariantsResponse, VehicleTcoResponse,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Delimited,
    Structured,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    /// Whole dollars.
    Usd(f64),
    /// Dollars per mile.
    PerMile(f64),
    /// Fraction printed as a percentage with two decimals.
    Percent(f64),
    Fixed(f64, usize),
    Empty,
}

fn fixed(x: f64, dp: usize) -> String {
    let s = format!("{x:.dp$}");
    // Rounding a small negative number must not print "-0".
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Usd(x) => fixed(*x, 0),
            Cell::PerMile(x) => fixed(*x, 4),
            Cell::Percent(x) => fixed(x * 100.0, 2),
            Cell::Fixed(x, dp) => fixed(*x, *dp),
            Cell::Empty => String::new(),
        }
    }

    fn numeric(&self) -> bool {
        !matches!(self, Cell::Text(_) | Cell::Empty)
    }
}

fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

fn year(y: Option<i32>) -> Cell {
    y.map_or(Cell::Empty, |y| Cell::Int(y as i64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, header: &[&str]) -> Self {
        Self { title: title.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn to_text(&self) -> String {
        let rendered: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &rendered {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str(&self.title);
            out.push('\n');
        }
        let line = |cells: &[String], right: &dyn Fn(usize) -> bool| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let pad = widths[i] - c.chars().count();
                    if right(i) { format!("{}{c}", " ".repeat(pad)) } else { format!("{c}{}", " ".repeat(pad)) }
                })
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let numeric_col = |i: usize| self.rows.iter().any(|r| r[i].numeric()) && self.rows.iter().all(|r| r[i].numeric() || r[i] == Cell::Empty);
        out.push_str(&line(&self.header, &numeric_col));
        out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(), &|_| false));
        for (r, cells) in rendered.iter().zip(&self.rows) {
            out.push_str(&line(r, &|i| cells[i].numeric()));
        }
        out
    }

    /// Comma separated, header row first, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render)).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("UTF-8 input")
    }
}

/// A result that can be printed in each output format.
pub trait Report: Serialize {
    /// Sections shown in table format.
    fn tables(&self) -> Vec<Table>;

    /// The flat record set written in delimited format.
    fn records(&self) -> Table;
}

pub fn structured<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("response serializes") + "\n"
}

pub fn render<R: Report>(r: &R, format: Format) -> String {
    match format {
        Format::Table => r.tables().iter().map(Table::to_text).collect::<Vec<_>>().join("\n"),
        Format::Delimited => r.records().to_csv(),
        Format::Structured => structured(r),
    }
}

fn components_table(title: &str, rows: &[crate::engine::ComponentRow]) -> Table {
    let mut t = Table::new(title, &["component", "discounted_usd", "levelized_usd_per_mile"]);
    for c in rows {
        t.row(vec![text(c.component.as_str()), Cell::Usd(c.discounted_usd), Cell::PerMile(c.levelized_usd_per_mile)]);
    }
    t
}

impl Report for VariantsResponse {
    fn tables(&self) -> Vec<Table> {
        vec![self.records()]
    }

    fn records(&self) -> Table {
        let mut t = Table::new(format!("Variants (dataset {})", self.dataset_sha256), &["variant", "class", "powertrain", "infrastructure", "factors"]);
        for v in &self.variants {
            let infra: Vec<&str> = v.infrastructure.iter().map(|i| i.as_str()).collect();
            t.row(vec![
                text(&v.id),
                text(v.class.as_str()),
                text(v.powertrain.as_str()),
                text(infra.join("+")),
                Cell::Int(v.factors.len() as i64),
            ]);
        }
        t
    }
}

impl Report for VehicleTcoResponse {
    fn tables(&self) -> Vec<Table> {
        let mut summary = Table::new(
            format!("Vehicle TCO: {} bought {} ({} advancement)", self.vehicle, self.year, self.advancement.as_str()),
            &["quantity", "value"],
        );
        summary.row(vec![text("gross_price_usd"), Cell::Usd(self.price.gross_usd)]);
        summary.row(vec![text("incentive_usd"), Cell::Usd(self.price.incentive_usd)]);
        summary.row(vec![text("net_price_usd"), Cell::Usd(self.price.net_usd)]);
        summary.row(vec![text("residual_value_usd"), Cell::Usd(self.residual_value_usd)]);
        summary.row(vec![text("tco_usd"), Cell::Usd(self.tco_usd)]);
        summary.row(vec![text("levelized_usd_per_mile"), Cell::PerMile(self.levelized_usd_per_mile)]);
        let mut price = Table::new("Price build-up", &["component", "usd"]);
        for c in &self.price.components {
            price.row(vec![text(&c.component), Cell::Usd(c.usd)]);
        }
        let mut yearly = Table::new("Cash flows (undiscounted)", &["year", "total_usd"]);
        for y in &self.yearly {
            yearly.row(vec![Cell::Int(y.year as i64), Cell::Usd(y.total_usd)]);
        }
        vec![summary, price, components_table("Cost components", &self.components), yearly]
    }

    fn records(&self) -> Table {
        let mut t = Table::new("", &["vehicle", "year", "component", "discounted_usd", "levelized_usd_per_mile"]);
        for c in &self.components {
            t.row(vec![
                text(&self.vehicle),
                Cell::Int(self.year as i64),
                text(c.component.as_str()),
                Cell::Usd(c.discounted_usd),
                Cell::PerMile(c.levelized_usd_per_mile),
            ]);
        }
        t.row(vec![
            text(&self.vehicle),
            Cell::Int(self.year as i64),
            text("total"),
            Cell::Usd(self.tco_usd),
            Cell::PerMile(self.levelized_usd_per_mile),
        ]);
        t
    }
}

impl Report for InfraTcoResponse {
    fn tables(&self) -> Vec<Table> {
        let mut summary = Table::new(
            format!("Infrastructure TCO: {} x{} from {}", self.infra_type.as_str(), self.stations, self.year),
            &["quantity", "value"],
        );
        summary.row(vec![text(format!("daily_throughput_{}", self.throughput_unit)), Cell::Fixed(self.daily_throughput, 2)]);
        summary.row(vec![text("capex_usd"), Cell::Usd(self.capex_usd)]);
        summary.row(vec![text("development_share_pct"), Cell::Percent(self.development_share)]);
        summary.row(vec![text("residual_value_usd"), Cell::Usd(self.residual_value_usd)]);
        summary.row(vec![text("tco_usd"), Cell::Usd(self.tco_usd)]);
        summary.row(vec![text(format!("levelized_usd_per_{}", self.throughput_unit)), Cell::Fixed(self.levelized_usd_per_unit, 4)]);
        vec![summary, self.records()]
    }

    fn records(&self) -> Table {
        let mut t = Table::new("CapEx items", &["item", "kind", "group", "quantity", "unit_usd", "cost_usd", "share_pct"]);
        for i in &self.capex_items {
            let group = match i.group {
                freight_tco_core::infra::ItemGroup::Equipment => "equipment",
                freight_tco_core::infra::ItemGroup::Development => "development",
            };
            t.row(vec![
                text(&i.id),
                text(i.kind),
                text(group),
                Cell::Fixed(i.quantity, 2),
                Cell::Usd(i.unit_usd),
                Cell::Usd(i.cost_usd),
                Cell::Percent(i.share),
            ]);
        }
        t
    }
}

impl Report for SystemTcoResponse {
    fn tables(&self) -> Vec<Table> {
        let mut summary = Table::new(
            format!(
                "System TCO: {} in {} ({} advancement, fleet of {})",
                self.variant,
                self.year,
                self.advancement.as_str(),
                self.fleet_size
            ),
            &["quantity", "value"],
        );
        summary.row(vec![text("vehicle_tco_usd"), Cell::Usd(self.vehicle_tco_usd)]);
        summary.row(vec![text("levelized_without_infra_usd_per_mile"), Cell::PerMile(self.levelized_without_infra_usd_per_mile)]);
        summary.row(vec![text("infra_adder_usd_per_mile"), Cell::PerMile(self.adder_usd_per_mile)]);
        summary.row(vec![text("levelized_with_infra_usd_per_mile"), Cell::PerMile(self.levelized_with_infra_usd_per_mile)]);
        let mut infra = Table::new(
            "Infrastructure",
            &["infra_type", "stations", "utilization_pct", "infra_tco_usd", "adder_usd_per_mile"],
        );
        for a in &self.infrastructure {
            infra.row(vec![
                text(a.infra_type.as_str()),
                Cell::Int(a.stations as i64),
                Cell::Percent(a.utilization),
                Cell::Usd(a.infra_tco_usd),
                Cell::PerMile(a.adder_usd_per_mile),
            ]);
        }
        let mut note = Table::new("Allocation", &["rule"]);
        note.row(vec![text(self.allocation_rule)]);
        vec![summary, infra, components_table("Vehicle cost components", &self.components), note]
    }

    fn records(&self) -> Table {
        let mut t = Table::new(
            "",
            &[
                "variant",
                "year",
                "advancement",
                "fleet_size",
                "infra_type",
                "stations",
                "utilization_pct",
                "adder_usd_per_mile",
                "levelized_without_infra_usd_per_mile",
                "levelized_with_infra_usd_per_mile",
            ],
        );
        for a in &self.infrastructure {
            t.row(vec![
                text(&self.variant),
                Cell::Int(self.year as i64),
                text(self.advancement.as_str()),
                Cell::Int(self.fleet_size as i64),
                text(a.infra_type.as_str()),
                Cell::Int(a.stations as i64),
                Cell::Percent(a.utilization),
                Cell::PerMile(a.adder_usd_per_mile),
                Cell::PerMile(self.levelized_without_infra_usd_per_mile),
                Cell::PerMile(self.levelized_with_infra_usd_per_mile),
            ]);
        }
        t
    }
}

impl Report for ScheduleResponse {
    fn tables(&self) -> Vec<Table> {
        let mut summary = Table::new("Station schedule", &["quantity", "value"]);
        summary.row(vec![text("stations"), Cell::Int(self.stations as i64)]);
        summary.row(vec![text("busy_h"), Cell::Fixed(self.busy_h, 2)]);
        summary.row(vec![text("utilization_pct"), Cell::Percent(self.utilization)]);
        vec![summary, self.records()]
    }

    fn records(&self) -> Table {
        let mut t = Table::new("Assignments", &["vehicle", "station", "start_h", "end_h"]);
        for a in &self.assignments {
            t.row(vec![text(&a.vehicle), Cell::Int(a.station as i64), Cell::Fixed(a.start_h, 2), Cell::Fixed(a.end_h, 2)]);
        }
        t
    }
}

impl Report for ProjectResponse {
    fn tables(&self) -> Vec<Table> {
        let mut header = vec!["variant".to_string(), "basis".to_string()];
        header.extend(self.years.iter().map(|y| y.to_string()));
        header.push("breakeven".into());
        let mut t = Table {
            title: format!("Levelized TCO ($/mi, moderate advancement), breakeven against {}", self.baseline),
            header,
            rows: Vec::new(),
        };
        for s in &self.series {
            for (basis, with, be) in
                [("vehicle", false, s.breakeven_without_infra_year), ("system", true, s.breakeven_with_infra_year)]
            {
                let mut row = vec![text(&s.variant), text(basis)];
                row.extend(s.points.iter().map(|p| {
                    Cell::PerMile(if with { p.with_infra_usd_per_mile } else { p.without_infra_usd_per_mile })
                }));
                row.push(if be.is_some() { year(be) } else { text("none") });
                t.row(row);
            }
        }
        vec![t]
    }

    fn records(&self) -> Table {
        let mut t = Table::new(
            "",
            &[
                "year",
                "variant",
                "tco_no_infra_usd_per_mile",
                "tco_with_infra_usd_per_mile",
                "low_no_infra_usd_per_mile",
                "high_no_infra_usd_per_mile",
                "low_with_infra_usd_per_mile",
                "high_with_infra_usd_per_mile",
                "parity_no_infra",
                "parity_with_infra",
            ],
        );
        for s in &self.series {
            for p in &s.points {
                t.row(vec![
                    Cell::Int(p.year as i64),
                    text(&s.variant),
                    Cell::PerMile(p.without_infra_usd_per_mile),
                    Cell::PerMile(p.with_infra_usd_per_mile),
                    Cell::PerMile(p.low_without_infra_usd_per_mile),
                    Cell::PerMile(p.high_without_infra_usd_per_mile),
                    Cell::PerMile(p.low_with_infra_usd_per_mile),
                    Cell::PerMile(p.high_with_infra_usd_per_mile),
                    text(p.parity_without_infra.to_string()),
                    text(p.parity_with_infra.to_string()),
                ]);
            }
        }
        t
    }
}

impl Report for SensitivityResponse {
    fn tables(&self) -> Vec<Table> {
        let mut t = self.records();
        t.title = format!(
            "Sensitivity of {} system TCO in {} to {}{}% per factor (baseline {} $/mi)",
            self.variant,
            self.year,
            if self.delta >= 0.0 { "+" } else { "" },
            fixed(self.delta * 100.0, 1),
            fixed(self.baseline_usd_per_mile, 4)
        );
        vec![t]
    }

    fn records(&self) -> Table {
        let mut t = Table::new(
            "",
            &["variant", "factor", "baseline_usd_per_mile", "perturbed_usd_per_mile", "pct_change"],
        );
        for r in &self.results {
            t.row(vec![
                text(&self.variant),
                text(&r.factor),
                Cell::PerMile(r.baseline_usd_per_mile),
                Cell::PerMile(r.perturbed_usd_per_mile),
                Cell::Fixed(r.relative_change * 100.0, 4),
            ]);
        }
        t
    }
}

impl Report for BreakevenResponse {
    fn tables(&self) -> Vec<Table> {
        let mut t = self.records();
        for cell in t.rows.iter_mut().flatten().filter(|c| **c == Cell::Empty) {
            *cell = text("none");
        }
        t.title = match self {
            BreakevenResponse::Series { years, .. } => format!("Breakeven over {} years", years.len()),
            BreakevenResponse::Variants { baseline, years, .. } => format!(
                "Breakeven against {baseline}, {}-{}",
                years.first().copied().unwrap_or_default(),
                years.last().copied().unwrap_or_default()
            ),
        };
        vec![t]
    }

    fn records(&self) -> Table {
        match self {
            BreakevenResponse::Series { breakeven_year, .. } => {
                let mut t = Table::new("", &["breakeven_year"]);
                t.row(vec![year(*breakeven_year)]);
                t
            }
            BreakevenResponse::Variants { results, .. } => {
                let mut t = Table::new("", &["variant", "breakeven_no_infra_year", "breakeven_with_infra_year"]);
                for r in results {
                    t.row(vec![text(&r.variant), year(r.without_infra_year), year(r.with_infra_year)]);
                }
                t
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_and_negative_zero() {
        assert_eq!(Cell::PerMile(2.032_43).render(), "2.0324");
        assert_eq!(Cell::Usd(1_189_130.4).render(), "1189130");
        assert_eq!(Cell::Usd(-0.3).render(), "0");
        assert_eq!(Cell::PerMile(-0.000_01).render(), "0.0000");
        assert_eq!(Cell::Percent(0.1234).render(), "12.34");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("ignored", &["a", "b"]);
        t.row(vec![text("x,y"), Cell::PerMile(1.0)]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1.0000\n");
    }

    #[test]
    fn text_alignment() {
        let mut t = Table::new("T", &["name", "v"]);
        t.row(vec![text("a"), Cell::Int(10)]);
        t.row(vec![text("bb"), Cell::Int(5)]);
        assert_eq!(t.to_text(), "T\nname   v\n----  --\na     10\nbb     5\n");
    }
}
