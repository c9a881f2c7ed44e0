use std::fmt;
use std::io::Write;
use std::path::Path;

use dcp_core::Error;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    LightCone(String),
    Io(String),
    ValidationFailed(usize),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::LightCone(_) => 3,
            CliError::Io(_) => 4,
            CliError::ValidationFailed(_) => 5,
            CliError::Numeric(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) => f.write_str(m),
            CliError::LightCone(m) => write!(f, "light cone: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::ValidationFailed(n) => write!(f, "{n} validation check(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::LightConeProximity { a, cone, eps } => CliError::LightCone(format!(
                "a={a} is inside the excluded window [{}, {}] around a={cone}",
                cone - eps,
                cone + eps
            )),
            Error::Domain(_) | Error::NonFiniteInput(_) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Gnuplot script for the three figure tables. Time is plotted in units of d/c.
pub fn gnuplot_script(d: f64, c: f64) -> String {
    let unit = d / c;
    format!(
        r##"# Plots fig1.csv, fig2.csv and fig3.csv written by `dcp figures`.
# Columns: 1 t, 2 d, 3 a, 4 E_d, 5 E_b, 6 E_p, 7 F_d, 8 F_b, 9 F_p, 10 relF
set datafile separator ","
set datafile commentschars "#"
set terminal pngcairo size 900,560
set xlabel "t [d/c]"
unit = {unit}

set output "fig1.png"
set ylabel "force (arb. units)"
plot "fig1.csv" using ($1/unit):9 with lines lw 2 lc rgb "red" title "partially dressed", \
     "" using ($1/unit):8 with lines dt 2 lw 2 lc rgb "blue" title "bare"

set output "fig2.png"
plot "fig2.csv" using ($1/unit):9 with lines lw 2 lc rgb "red" title "partially dressed", \
     "" using ($1/unit):8 with lines dt 2 lw 2 lc rgb "blue" title "bare", \
     "" using ($1/unit):7 with lines lc rgb "black" title "static"

set output "fig3.png"
set ylabel "(F_p - F_d)/F_d"
plot "fig3.csv" using ($1/unit):10 with lines lw 2 lc rgb "red" notitle
"##
    )
}
