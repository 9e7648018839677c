//! Capacities, inequality checks between counts, and count tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::count::{binomial, BigCount};
use crate::enumeration::{enumerate_codes, EnumerationOptions, Tally};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::shapes::{count_by_dp_with, DpOptions};
use crate::strips::count_strip;

/// `log2(count) / (m n)`.
pub fn capacity(count: &BigCount, m: u32, n: u32) -> Result<f64> {
    let l = count.log2().ok_or_else(|| Error::Precondition("capacity of a zero count".into()))?;
    Ok(l / (f64::from(m) * f64::from(n)))
}

/// Regularity tally of the `m x n` grid.
pub type TallyRow = (u32, u32, Tally);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Closed recursions; one side must be at most 3.
    Strip,
    /// Shape inclusion-exclusion.
    Dp,
    /// Flip-graph traversal.
    Enumerate,
    /// Strip when possible, else the DP.
    Auto,
}

pub fn count_triangulations(grid: GridSpec, method: CountMethod, budget_bytes: u64) -> Result<BigCount> {
    match method {
        CountMethod::Strip => count_strip(grid.m(), grid.n()),
        CountMethod::Dp => Ok(count_by_dp_with(grid, &DpOptions { budget_bytes, ..DpOptions::default() })?.count),
        CountMethod::Enumerate => enumerate_codes(grid, &EnumerationOptions { budget_bytes }, |_, _| {}),
        CountMethod::Auto => {
            if grid.m().min(grid.n()) <= 3 {
                count_strip(grid.m(), grid.n())
            } else {
                count_triangulations(grid, CountMethod::Dp, budget_bytes)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityRow {
    pub m: u32,
    pub n: u32,
    pub count: BigCount,
    pub capacity: f64,
}

impl CapacityRow {
    pub fn new(m: u32, n: u32, count: BigCount) -> Result<Self> {
        let capacity = capacity(&count, m, n)?;
        Ok(CapacityRow { m, n, count, capacity })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Text,
}

/// Rows `n = 1..=n_max` for width `m`.
pub fn capacity_rows(m: u32, n_max: u32, method: CountMethod, budget_bytes: u64) -> Result<Vec<CapacityRow>> {
    (1..=n_max)
        .map(|n| CapacityRow::new(m, n, count_triangulations(GridSpec::new(m, n)?, method, budget_bytes)?))
        .collect()
}

/// CSV `n,count,capacity` (capacity to 6 decimals), or an aligned text table
/// that also flags whether the capacity rose from the previous row.
pub fn render_table(rows: &[CapacityRow], format: TableFormat) -> String {
    let mut out = String::new();
    match format {
        TableFormat::Csv => {
            out.push_str("n,count,capacity\n");
            for r in rows {
                let _ = writeln!(out, "{},{},{:.6}", r.n, r.count, r.capacity);
            }
        }
        TableFormat::Text => {
            let width = rows.iter().map(|r| r.count.to_string().len()).max().unwrap_or(5).max(5);
            let _ = writeln!(out, "{:>3}  {:>width$}  {:>8}  trend", "n", "count", "capacity");
            let mut prev: Option<f64> = None;
            for r in rows {
                let trend = match prev {
                    None => " ",
                    Some(p) if r.capacity > p => "+",
                    Some(p) if r.capacity < p => "-",
                    Some(_) => "=",
                };
                let _ = writeln!(out, "{:>3}  {:>width$}  {:>8.6}  {}", r.n, r.count.to_string(), r.capacity, trend);
                prev = Some(r.capacity);
            }
        }
    }
    out
}

pub fn emit_table(m: u32, n_max: u32, format: TableFormat) -> Result<String> {
    Ok(render_table(&capacity_rows(m, n_max, CountMethod::Auto, DpOptions::default().budget_bytes)?, format))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    /// Human-readable statement of the compared quantities.
    pub statement: String,
    pub left: String,
    pub right: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    /// One line per check.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.holds { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{verdict} {:<20} {}  [{} vs {}]", c.name, c.statement, c.left, c.right);
        }
        out
    }

    fn push(&mut self, name: &str, statement: String, left: &BigCount, right: &BigCount, holds: bool) {
        self.checks.push(BoundCheck {
            name: name.into(),
            statement,
            left: left.to_string(),
            right: right.to_string(),
            holds,
        });
    }
}

/// Every applicable inequality among the given exact counts and regularity tallies.
///
/// * `f(m,n) < 2^(3mn-m-n)` and the equivalent capacity bound `c < 3 - 1/m - 1/n`;
/// * `f(m,n) >= C(2n,n)^m` (cutting into `m` strips of width 1);
/// * `f(m,n1+n2) >= f(m,n1) f(m,n2)`;
/// * `f_irreg(m,n1+n2) >= f(m,n1) f_irreg(m,n2)`;
/// * `f_reg(m,n1+n2+1) >= f_reg(m,n1) f_reg(m,n2)`;
/// * `f_reg(m,n+1) >= f_reg(m,n) C(2m,m)` (adding one strip of height 1).
///
/// Counts are symmetric in `m` and `n`, so each row is also used transposed.
pub fn bound_checks(rows: &[CapacityRow], tallies: &[TallyRow]) -> BoundReport {
    let mut report = BoundReport::default();
    let mut f: BTreeMap<(u32, u32), BigCount> = BTreeMap::new();
    for r in rows {
        f.insert((r.m, r.n), r.count.clone());
        f.insert((r.n, r.m), r.count.clone());
    }
    let mut irr: BTreeMap<(u32, u32), BigCount> = BTreeMap::new();
    let mut reg: BTreeMap<(u32, u32), BigCount> = BTreeMap::new();
    for (m, n, t) in tallies {
        for key in [(*m, *n), (*n, *m)] {
            irr.insert(key, t.irregular.clone());
            reg.insert(key, t.regular.clone());
            f.entry(key).or_insert_with(|| t.total.clone());
        }
    }

    for r in rows {
        let (m, n) = (r.m, r.n);
        let e = 3 * u64::from(m) * u64::from(n) - u64::from(m) - u64::from(n);
        let upper = BigCount::power_of_two(e);
        // the 1x1 grid has a single interior edge and meets the bound exactly
        if m * n == 1 {
            report.push("upper bound", format!("f({m},{n}) = 2^{e}"), &r.count, &upper, r.count == upper);
        } else {
            report.push("upper bound", format!("f({m},{n}) < 2^{e}"), &r.count, &upper, r.count < upper);
            let cap_bound = 3.0 - 1.0 / f64::from(m) - 1.0 / f64::from(n);
            report.checks.push(BoundCheck {
                name: "capacity bound".into(),
                statement: format!("c({m},{n}) < 3 - 1/{m} - 1/{n}"),
                left: format!("{:.6}", r.capacity),
                right: format!("{cap_bound:.6}"),
                holds: r.capacity < cap_bound,
            });
        }
        let strips = binomial(2 * u64::from(n), u64::from(n)).pow(m);
        report.push(
            "strip lower bound",
            format!("f({m},{n}) >= C({},{n})^{m}", 2 * n),
            &r.count,
            &strips,
            r.count >= strips,
        );
    }

    let keys: Vec<(u32, u32)> = f.keys().copied().collect();
    for &(m, n1) in &keys {
        for &(m2, n2) in &keys {
            if m2 != m || n2 < n1 {
                continue;
            }
            if let Some(big) = f.get(&(m, n1 + n2)) {
                let prod = BigCount(&f[&(m, n1)].0 * &f[&(m, n2)].0);
                report.push(
                    "supermultiplicative",
                    format!("f({m},{}) >= f({m},{n1}) f({m},{n2})", n1 + n2),
                    big,
                    &prod,
                    *big >= prod,
                );
            }
        }
    }

    let irr_keys: Vec<(u32, u32)> = irr.keys().copied().collect();
    for &(m, n2) in &irr_keys {
        for &(m1, n1) in &keys {
            if m1 != m {
                continue;
            }
            if let Some(big) = irr.get(&(m, n1 + n2)) {
                let prod = BigCount(&f[&(m, n1)].0 * &irr[&(m, n2)].0);
                report.push(
                    "irregular patching",
                    format!("f_irreg({m},{}) >= f({m},{n1}) f_irreg({m},{n2})", n1 + n2),
                    big,
                    &prod,
                    *big >= prod,
                );
            }
        }
    }

    let reg_keys: Vec<(u32, u32)> = reg.keys().copied().collect();
    for &(m, n1) in &reg_keys {
        for &(m2, n2) in &reg_keys {
            if m2 != m || n2 < n1 {
                continue;
            }
            if let Some(big) = reg.get(&(m, n1 + n2 + 1)) {
                let prod = BigCount(&reg[&(m, n1)].0 * &reg[&(m, n2)].0);
                report.push(
                    "regular patching",
                    format!("f_reg({m},{}) >= f_reg({m},{n1}) f_reg({m},{n2})", n1 + n2 + 1),
                    big,
                    &prod,
                    *big >= prod,
                );
            }
        }
        if let Some(big) = reg.get(&(m, n1 + 1)) {
            let prod = BigCount(&reg[&(m, n1)].0 * &binomial(2 * u64::from(m), u64::from(m)).0);
            report.push(
                "regular strip",
                format!("f_reg({m},{}) >= f_reg({m},{n1}) C({},{m})", n1 + 1, 2 * m),
                big,
                &prod,
                *big >= prod,
            );
        }
    }
    report
}

/// Parse CSV with a header naming at least `m`, `n`, `count`, and optionally
/// `irregular` (and `regular`). Rows with an irregular count become tallies.
pub fn parse_results_csv(text: &str) -> Result<(Vec<CapacityRow>, Vec<TallyRow>)> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (Some(cm), Some(cn), Some(cc)) = (col("m"), col("n"), col("count")) else {
        return Err(Error::Parse("header must name the columns m, n and count".into()));
    };
    let ci = col("irregular");
    let cr = col("regular");
    let mut rows = Vec::new();
    let mut tallies = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |i: usize| rec.get(i).unwrap_or("").to_string();
        let bad = |what: &str| Error::Parse(format!("record {}: bad {what}", line + 1));
        let m: u32 = field(cm).parse().map_err(|_| bad("m"))?;
        let n: u32 = field(cn).parse().map_err(|_| bad("n"))?;
        GridSpec::new(m, n)?;
        let count: BigCount = field(cc).parse().map_err(|_| bad("count"))?;
        if let Some(ci) = ci.filter(|&i| !field(i).is_empty()) {
            let irregular: BigCount = field(ci).parse().map_err(|_| bad("irregular"))?;
            if irregular > count {
                return Err(bad("irregular (exceeds count)"));
            }
            let regular = BigCount(&count.0 - &irregular.0);
            if let Some(cr) = cr.filter(|&i| !field(i).is_empty()) {
                let given: BigCount = field(cr).parse().map_err(|_| bad("regular"))?;
                if given != regular {
                    return Err(bad("regular (does not add up)"));
                }
            }
            tallies.push((m, n, Tally { total: count.clone(), regular, irregular }));
        }
        rows.push(CapacityRow::new(m, n, count)?);
    }
    Ok((rows, tallies))
}
