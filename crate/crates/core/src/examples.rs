//! Built-in configurations and plurigenus tables.

use serde::Serialize;

use crate::canonical::canonical_data;
use crate::error::{Error, Result};
use crate::invariants::{FiberDatum, SurfaceConfig};

/// Characteristic 3 surface over `P¹` with `chi = 1` and two tame multiple
/// fibers. Its stable threshold is 5 while the criterion already holds at 3.
pub fn example_surface_3_1() -> SurfaceConfig {
    SurfaceConfig::new(3, 0, 1, 0, vec![FiberDatum::tame(2), FiberDatum::tame(2)])
}

/// Characteristic 2 surface over an elliptic curve with `chi = 0` and a single
/// tame fiber. Its existence is open; if it exists its stable threshold is 6.
pub fn question_3_3_config() -> SurfaceConfig {
    SurfaceConfig::new(2, 1, 0, 0, vec![FiberDatum::tame(1)])
}

/// Built-in configurations by name.
pub fn builtin() -> Vec<(&'static str, SurfaceConfig)> {
    vec![
        ("example-3-1", example_surface_3_1()),
        ("question-3-3", question_3_3_config()),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PlurigenusRecord {
    pub m: i64,
    pub degree: i64,
    pub h0_lower: i64,
    pub h0_upper: i64,
    pub gives_fibration: bool,
}

pub fn plurigenus_table(config: &SurfaceConfig, m_max: i64) -> Result<Vec<PlurigenusRecord>> {
    if m_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "m_max must be at least 1, got {m_max}"
        )));
    }
    let class = canonical_data(config)?;
    (1..=m_max)
        .map(|m| {
            let bounds = class.plurigenus_bounds(m)?;
            Ok(PlurigenusRecord {
                m,
                degree: bounds.degree,
                h0_lower: bounds.lower,
                h0_upper: bounds.upper,
                gives_fibration: class.gives_fibration(m)?,
            })
        })
        .collect()
}

/// Renders a table as comma-separated text with a header row.
pub fn table_to_csv(records: &[PlurigenusRecord]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in records {
        writer
            .serialize(r)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Renders a table with aligned columns; exact plurigenera print as one number.
pub fn table_to_text(records: &[PlurigenusRecord]) -> String {
    let mut out = format!(
        "{:>4} {:>7} {:>8} {:>9}\n",
        "m", "deg D_m", "h0", "fibration"
    );
    for r in records {
        let h0 = if r.h0_lower == r.h0_upper {
            r.h0_lower.to_string()
        } else {
            format!("[{},{}]", r.h0_lower, r.h0_upper)
        };
        out.push_str(&format!(
            "{:>4} {:>7} {:>8} {:>9}\n",
            r.m,
            r.degree,
            h0,
            if r.gives_fibration { "yes" } else { "no" }
        ));
    }
    out
}
