//! Time and distance sweeps over the model, and analysis of the resulting
//! traces (sign changes, extrema, settling onto the static value).

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{EvalPoint, Model, PhysicalParams, StateKind};
use crate::error::{domain, Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Time,
    Distance,
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::Time => "time",
            SweepVariable::Distance => "distance",
        })
    }
}

impl FromStr for SweepVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(SweepVariable::Time),
            "distance" => Ok(SweepVariable::Distance),
            other => Err(Error::Parse(format!("unknown sweep variable `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub exclude_lightcone: bool,
}

impl GridSpec {
    pub fn time(start: f64, stop: f64, steps: usize) -> Self {
        GridSpec {
            variable: SweepVariable::Time,
            start,
            stop,
            steps,
            exclude_lightcone: true,
        }
    }

    pub fn distance(start: f64, stop: f64, steps: usize) -> Self {
        GridSpec {
            variable: SweepVariable::Distance,
            ..GridSpec::time(start, stop, steps)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start >= self.stop {
            return Err(domain(format!(
                "grid needs start < stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if self.steps < 2 {
            return Err(domain("grid needs at least two steps"));
        }
        Ok(())
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.stop;
        }
        self.start + (self.stop - self.start) * (i as f64) / ((self.steps - 1) as f64)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub t: f64,
    pub d: f64,
    pub a: f64,
    #[serde(rename = "E_d")]
    pub e_d: f64,
    #[serde(rename = "E_b")]
    pub e_b: f64,
    #[serde(rename = "E_p")]
    pub e_p: f64,
    #[serde(rename = "F_d")]
    pub f_d: f64,
    #[serde(rename = "F_b")]
    pub f_b: f64,
    #[serde(rename = "F_p")]
    pub f_p: f64,
    #[serde(rename = "relF")]
    pub rel_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Column {
    T,
    D,
    A,
    EnergyDressed,
    EnergyBare,
    EnergyPartial,
    ForceDressed,
    ForceBare,
    ForcePartial,
    RelativeForce,
}

impl Column {
    pub const ALL: [Column; 10] = [
        Column::T,
        Column::D,
        Column::A,
        Column::EnergyDressed,
        Column::EnergyBare,
        Column::EnergyPartial,
        Column::ForceDressed,
        Column::ForceBare,
        Column::ForcePartial,
        Column::RelativeForce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::T => "t",
            Column::D => "d",
            Column::A => "a",
            Column::EnergyDressed => "E_d",
            Column::EnergyBare => "E_b",
            Column::EnergyPartial => "E_p",
            Column::ForceDressed => "F_d",
            Column::ForceBare => "F_b",
            Column::ForcePartial => "F_p",
            Column::RelativeForce => "relF",
        }
    }

    pub fn get(self, row: &Row) -> f64 {
        match self {
            Column::T => row.t,
            Column::D => row.d,
            Column::A => row.a,
            Column::EnergyDressed => row.e_d,
            Column::EnergyBare => row.e_b,
            Column::EnergyPartial => row.e_p,
            Column::ForceDressed => row.f_d,
            Column::ForceBare => row.f_b,
            Column::ForcePartial => row.f_p,
            Column::RelativeForce => row.rel_f,
        }
    }

    /// The static quantity a time-dependent column settles onto.
    pub fn static_reference(self) -> Reference {
        match self {
            Column::EnergyBare | Column::EnergyPartial => Reference::Column(Column::EnergyDressed),
            Column::ForceBare | Column::ForcePartial => Reference::Column(Column::ForceDressed),
            Column::RelativeForce => Reference::Value(0.0),
            other => Reference::Column(other),
        }
    }
}

impl FromStr for Column {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Column::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownColumn(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcludedPoint {
    pub index: usize,
    pub t: f64,
    pub d: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub version: String,
    pub params: PhysicalParams,
    pub lightcone_eps: f64,
    pub grid: GridSpec,
    /// The coordinate held fixed: `d` for a time sweep, `t` for a distance sweep.
    pub fixed: f64,
    pub excluded: Vec<ExcludedPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub meta: SweepMeta,
    pub rows: Vec<Row>,
}

enum Entry {
    Row(Row),
    Excluded(ExcludedPoint),
}

fn evaluate_point(model: &Model, pt: EvalPoint, index: usize, exclude: bool) -> Result<Entry> {
    let a = model.reduced_time(pt);
    let attempt = || -> Result<Row> {
        let triple = model.energy_triple(pt)?;
        if triple.on_lightcone {
            return Err(Error::LightConeProximity {
                a,
                cone: 1.0,
                eps: model.lightcone_eps,
            });
        }
        let f_d = model.force(StateKind::Dressed, pt)?;
        let f_b = model.force(StateKind::Bare, pt)?;
        let f_p = model.force(StateKind::Partial, pt)?;
        if f_d == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Row {
            t: pt.t,
            d: pt.d,
            a,
            e_d: triple.e_dressed,
            e_b: triple.e_bare,
            e_p: triple.e_partial,
            f_d,
            f_b,
            f_p,
            rel_f: (f_p - f_d) / f_d,
        })
    };
    match attempt() {
        Ok(row) => Ok(Entry::Row(row)),
        Err(Error::LightConeProximity { .. }) if exclude => Ok(Entry::Excluded(ExcludedPoint {
            index,
            t: pt.t,
            d: pt.d,
            a,
        })),
        Err(Error::LightConeProximity { .. }) => {
            let e_d = model.energy_dressed(pt.d)?;
            let f_d = model.force(StateKind::Dressed, pt)?;
            Ok(Entry::Row(Row {
                t: pt.t,
                d: pt.d,
                a,
                e_d,
                e_b: f64::NAN,
                e_p: f64::NAN,
                f_d,
                f_b: f64::NAN,
                f_p: f64::NAN,
                rel_f: f64::NAN,
            }))
        }
        Err(e) => Err(e),
    }
}

/// Evaluates every grid point (in parallel) and assembles the table in grid
/// order. Points whose force stencil touches the light-cone window are listed
/// in `meta.excluded` when `grid.exclude_lightcone` is set.
pub fn run_sweep(model: &Model, fixed: f64, grid: GridSpec) -> Result<SweepTable> {
    grid.validate()?;
    let points: Vec<EvalPoint> = (0..grid.steps)
        .map(|i| {
            let x = grid.point(i);
            match grid.variable {
                SweepVariable::Time => EvalPoint::new(fixed, x),
                SweepVariable::Distance => EvalPoint::new(x, fixed),
            }
        })
        .collect::<Result<_>>()?;
    let entries: Vec<Result<Entry>> = points
        .par_iter()
        .enumerate()
        .map(|(i, &pt)| evaluate_point(model, pt, i, grid.exclude_lightcone))
        .collect();
    let mut rows = Vec::with_capacity(grid.steps);
    let mut excluded = Vec::new();
    for entry in entries {
        match entry? {
            Entry::Row(r) => rows.push(r),
            Entry::Excluded(x) => excluded.push(x),
        }
    }
    Ok(SweepTable {
        meta: SweepMeta {
            version: VERSION.to_string(),
            params: model.params,
            lightcone_eps: model.lightcone_eps,
            grid,
            fixed,
            excluded,
        },
        rows,
    })
}

const CSV_COLUMNS: &str = "t,d,a,E_d,E_b,E_p,F_d,F_b,F_p,relF";

impl SweepTable {
    pub fn sweep_value(&self, row: &Row) -> f64 {
        match self.meta.grid.variable {
            SweepVariable::Time => row.t,
            SweepVariable::Distance => row.d,
        }
    }

    pub fn column(&self, column: Column) -> Vec<f64> {
        self.rows.iter().map(|r| column.get(r)).collect()
    }

    /// Comma-separated values. Metadata and excluded points are `#` comment
    /// lines so gnuplot reads the file as-is; floats use the shortest
    /// representation that parses back exactly.
    pub fn to_csv(&self) -> String {
        let m = &self.meta;
        let p = &m.params;
        let g = &m.grid;
        let mut out = String::new();
        let _ = writeln!(out, "# dcp sweep {}", m.version);
        let _ = writeln!(
            out,
            "# params mu={} k0={} k0p={} c={} lightcone_eps={}",
            p.mu, p.k0, p.k0p, p.c, m.lightcone_eps
        );
        let _ = writeln!(
            out,
            "# grid variable={} start={} stop={} steps={} fixed={} exclude_lightcone={}",
            g.variable, g.start, g.stop, g.steps, m.fixed, g.exclude_lightcone
        );
        let _ = writeln!(out, "# {CSV_COLUMNS}");
        let mut rows = self.rows.iter();
        let mut excluded = m.excluded.iter().peekable();
        for i in 0..(self.rows.len() + m.excluded.len()) {
            if let Some(x) = excluded.next_if(|x| x.index == i) {
                let _ = writeln!(out, "# excluded a={} t={} d={}", x.a, x.t, x.d);
            } else if let Some(r) = rows.next() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.t, r.d, r.a, r.e_d, r.e_b, r.e_p, r.f_d, r.f_b, r.f_p, r.rel_f
                );
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<SweepTable> {
        let mut lines = text.lines();
        let mut header = |prefix: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| Error::Parse("truncated header".into()))?;
            line.strip_prefix(prefix)
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("expected `{prefix}`, got `{line}`")))
        };
        let version = header("# dcp sweep ")?;
        let params = KeyValues::parse(&header("# params ")?)?;
        let grid = KeyValues::parse(&header("# grid ")?)?;
        let columns = header("# ")?;
        if columns != CSV_COLUMNS {
            return Err(Error::Parse(format!("unexpected columns `{columns}`")));
        }
        let meta_params = PhysicalParams {
            mu: params.float("mu")?,
            k0: params.float("k0")?,
            k0p: params.float("k0p")?,
            c: params.float("c")?,
        };
        let grid_spec = GridSpec {
            variable: grid.get("variable")?.parse()?,
            start: grid.float("start")?,
            stop: grid.float("stop")?,
            steps: grid.value("steps")?,
            exclude_lightcone: grid.value("exclude_lightcone")?,
        };
        let mut rows = Vec::new();
        let mut excluded = Vec::new();
        for (i, line) in lines.enumerate() {
            if let Some(rest) = line.strip_prefix("# excluded ") {
                let kv = KeyValues::parse(rest)?;
                excluded.push(ExcludedPoint {
                    index: i,
                    t: kv.float("t")?,
                    d: kv.float("d")?,
                    a: kv.float("a")?,
                });
                continue;
            }
            let fields: Vec<f64> = line
                .split(',')
                .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
                .collect::<Result<_>>()?;
            if fields.len() != 10 {
                return Err(Error::Parse(format!("expected 10 fields, got {}", fields.len())));
            }
            rows.push(Row {
                t: fields[0],
                d: fields[1],
                a: fields[2],
                e_d: fields[3],
                e_b: fields[4],
                e_p: fields[5],
                f_d: fields[6],
                f_b: fields[7],
                f_p: fields[8],
                rel_f: fields[9],
            });
        }
        Ok(SweepTable {
            meta: SweepMeta {
                version,
                params: meta_params,
                lightcone_eps: params.float("lightcone_eps")?,
                grid: grid_spec,
                fixed: grid.float("fixed")?,
                excluded,
            },
            rows,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep tables serialize")
    }
}

struct KeyValues(Vec<(String, String)>);

impl KeyValues {
    fn parse(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(|tok| {
                tok.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got `{tok}`")))
            })
            .collect::<Result<_>>()
            .map(KeyValues)
    }

    fn get(&self, key: &str) -> Result<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Parse(format!("missing `{key}`")))
    }

    fn value<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        let v = self.get(key)?;
        v.parse().map_err(|e| Error::Parse(format!("{key}={v}: {e}")))
    }

    fn float(&self, key: &str) -> Result<f64> {
        self.value(key)
    }
}

/// What a trace is expected to settle onto.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Reference {
    Column(Column),
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub location: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceAnalysis {
    /// Sweep-variable brackets, each holding exactly one sampled sign flip.
    pub sign_changes: Vec<(f64, f64)>,
    pub extrema: Vec<Extremum>,
    /// Earliest window start after which every windowed mean stays within
    /// tolerance of the reference.
    pub settling_time: Option<f64>,
}

pub const MIN_TRACE_ROWS: usize = 10;

/// Sign changes, local extrema, and settling of `column` onto its static
/// reference (see [`Column::static_reference`]).
pub fn analyze_trace(table: &SweepTable, column: Column, window: f64, tol: f64) -> Result<TraceAnalysis> {
    analyze_trace_against(table, column, column.static_reference(), window, tol)
}

/// As [`analyze_trace`] with an explicit reference. `tol` is relative to the
/// windowed mean of `|reference|`, or absolute when that mean is zero.
pub fn analyze_trace_against(
    table: &SweepTable,
    column: Column,
    reference: Reference,
    window: f64,
    tol: f64,
) -> Result<TraceAnalysis> {
    if table.rows.len() < MIN_TRACE_ROWS {
        return Err(Error::InsufficientData {
            needed: MIN_TRACE_ROWS,
            got: table.rows.len(),
        });
    }
    if !(window > 0.0) {
        return Err(domain("window must be positive"));
    }
    let xs: Vec<f64> = table.rows.iter().map(|r| table.sweep_value(r)).collect();
    let ys = table.column(column);
    let refs: Vec<f64> = match reference {
        Reference::Column(c) => table.column(c),
        Reference::Value(v) => vec![v; ys.len()],
    };
    Ok(TraceAnalysis {
        sign_changes: sign_changes(&xs, &ys),
        extrema: extrema(&xs, &ys),
        settling_time: settling_time(&xs, &ys, &refs, window, tol),
    })
}

fn sign_changes(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for (&x, &y) in xs.iter().zip(ys) {
        if y == 0.0 || !y.is_finite() {
            continue;
        }
        if let Some((lx, ly)) = last {
            if ly.signum() != y.signum() {
                out.push((lx, x));
            }
        }
        last = Some((x, y));
    }
    out
}

fn extrema(xs: &[f64], ys: &[f64]) -> Vec<Extremum> {
    let mut out = Vec::new();
    for i in 1..ys.len().saturating_sub(1) {
        let (l, v, r) = (ys[i - 1], ys[i], ys[i + 1]);
        if !(l.is_finite() && v.is_finite() && r.is_finite()) {
            continue;
        }
        let kind = if v > l && v > r {
            ExtremumKind::Max
        } else if v < l && v < r {
            ExtremumKind::Min
        } else {
            continue;
        };
        out.push(Extremum {
            location: xs[i],
            value: v,
            kind,
        });
    }
    out
}

fn settling_time(xs: &[f64], ys: &[f64], refs: &[f64], window: f64, tol: f64) -> Option<f64> {
    let n = xs.len();
    let last = xs[n - 1];
    // Prefix sums of deviation and |reference|.
    let mut dev = vec![0.0; n + 1];
    let mut mag = vec![0.0; n + 1];
    let mut bad = vec![0usize; n + 1];
    for i in 0..n {
        let dv = ys[i] - refs[i];
        let finite = dv.is_finite();
        dev[i + 1] = dev[i] + if finite { dv } else { 0.0 };
        mag[i + 1] = mag[i] + if finite { refs[i].abs() } else { 0.0 };
        bad[i + 1] = bad[i] + usize::from(!finite);
    }
    let slack = 1e-9 * window;
    let mut settled: Option<f64> = None;
    let mut end = 0;
    let mut any = false;
    for i in 0..n {
        if xs[i] + window > last + slack {
            break;
        }
        while end < n && xs[end] <= xs[i] + window + slack {
            end += 1;
        }
        any = true;
        let count = (end - i - (bad[end] - bad[i])) as f64;
        let ok = count > 0.0 && {
            let mean_dev = (dev[end] - dev[i]) / count;
            let scale = (mag[end] - mag[i]) / count;
            let bound = if scale > 0.0 { tol * scale } else { tol };
            mean_dev.abs() <= bound
        };
        match (ok, settled) {
            (true, None) => settled = Some(xs[i]),
            (false, _) => settled = None,
            _ => {}
        }
    }
    if any {
        settled
    } else {
        None
    }
}
