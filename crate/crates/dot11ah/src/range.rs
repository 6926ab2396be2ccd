//! Maximum-range table: one row per path-loss model, one column per radio.

use std::io::Write;

use dot11ah_core::profiles::{builtin_profile, radio_presets, ProfileId, StandardProfile};
use dot11ah_core::propagation::{max_range, PathLossModel};

use crate::error::Result;
use crate::format::{meters, sig};
use crate::published::{deviation_pct, published_range};

/// A radio column: a profile with a specific preset applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeColumn {
    pub label: String,
    /// Name of the applied preset, `None` for a profile loaded from a scenario.
    pub preset: Option<String>,
    pub profile: StandardProfile,
}

impl RangeColumn {
    pub fn preset(id: ProfileId, preset: &str) -> Result<Self> {
        let profile = builtin_profile(id).with_preset(preset)?;
        let label = if radio_presets(id).len() > 1 {
            format!("{id}@{preset}")
        } else {
            id.to_string()
        };
        Ok(RangeColumn {
            label,
            preset: Some(preset.to_owned()),
            profile,
        })
    }

    /// Every preset of `id`, or only `preset` when given.
    pub fn for_profile(id: ProfileId, preset: Option<&str>) -> Result<Vec<Self>> {
        match preset {
            Some(p) => Ok(vec![RangeColumn::preset(id, p)?]),
            None => radio_presets(id)
                .iter()
                .map(|p| RangeColumn::preset(id, p.name))
                .collect(),
        }
    }

    pub fn custom(profile: StandardProfile) -> Self {
        RangeColumn {
            label: profile.id.to_string(),
            preset: None,
            profile,
        }
    }
}

/// ah-long-header, ac@5.15, ac@5.45, n-2.4, a@5.15, a@5.45.
pub fn default_columns() -> Vec<RangeColumn> {
    [
        (ProfileId::AhLongHeader, "0.9"),
        (ProfileId::Ac, "5.15"),
        (ProfileId::Ac, "5.45"),
        (ProfileId::N24, "2.4"),
        (ProfileId::A, "5.15"),
        (ProfileId::A, "5.45"),
    ]
    .into_iter()
    .map(|(id, preset)| RangeColumn::preset(id, preset).expect("built-in preset"))
    .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeTable {
    pub models: Vec<PathLossModel>,
    pub columns: Vec<RangeColumn>,
    /// `cells[model][column]`; `None` where the link closes nowhere.
    pub cells: Vec<Vec<Option<f64>>>,
}

impl RangeTable {
    pub fn compute(models: &[PathLossModel], columns: Vec<RangeColumn>) -> Self {
        let cells = models
            .iter()
            .map(|model| {
                columns
                    .iter()
                    .map(|c| {
                        c.profile
                            .link_budget()
                            .and_then(|budget| max_range(&budget, model))
                            .ok()
                    })
                    .collect()
            })
            .collect();
        RangeTable {
            models: models.to_vec(),
            columns,
            cells,
        }
    }

    pub fn has_unreachable(&self) -> bool {
        self.cells.iter().flatten().any(Option::is_none)
    }

    fn published(&self, row: usize, col: usize) -> Option<f64> {
        let c = &self.columns[col];
        published_range(self.models[row].kind, c.profile.id, c.preset.as_deref()?)
            .map(|p| p.range_m)
    }

    /// `model,<col>...`, with `<col>_published,<col>_dev_pct` after each
    /// column when `compare` is set. Missing values are `n/a`.
    pub fn write_csv<W: Write>(&self, out: W, compare: bool) -> Result<()> {
        let mut w = csv_writer(out);
        let mut header = vec!["model".to_owned()];
        for c in &self.columns {
            header.push(c.label.clone());
            if compare {
                header.push(format!("{}_published", c.label));
                header.push(format!("{}_dev_pct", c.label));
            }
        }
        w.write_record(&header)?;
        for (row, model) in self.models.iter().enumerate() {
            let mut record = vec![model.kind.label().to_owned()];
            for col in 0..self.columns.len() {
                let value = self.cells[row][col];
                record.push(value.map_or_else(|| NA.to_owned(), meters));
                if compare {
                    let published = self.published(row, col);
                    record.push(published.map_or_else(|| NA.to_owned(), meters));
                    record.push(match (value, published) {
                        (Some(v), Some(p)) => sig(deviation_pct(v, p), 3),
                        _ => NA.to_owned(),
                    });
                }
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const NA: &str = "n/a";

pub(crate) fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_shape() {
        let t = RangeTable::compute(&PathLossModel::all(), default_columns());
        let mut out = Vec::new();
        t.write_csv(&mut out, false).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("model,ah-long-header,ac@5.15,ac@5.45,n-2.4,a@5.15,a@5.45")
        );
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().any(|l| l.starts_with("indoor-d,1530.")));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn zero_budget_is_na() {
        let mut p = builtin_profile(ProfileId::A);
        p.tx_power_dbm = p.sensitivity_dbm;
        let t = RangeTable::compute(&[PathLossModel::MACRO], vec![RangeColumn::custom(p)]);
        assert!(t.has_unreachable());
        let mut out = Vec::new();
        t.write_csv(&mut out, true).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "model,a,a_published,a_dev_pct\nmacro,n/a,n/a,n/a\n"
        );
    }

    #[test]
    fn compare_columns() {
        let cols = RangeColumn::for_profile(ProfileId::Ac, Some("5.15")).unwrap();
        let t = RangeTable::compute(&[PathLossModel::INDOOR_C], cols);
        let mut out = Vec::new();
        t.write_csv(&mut out, true).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(
            text.starts_with(
                "model,ac@5.15,ac@5.15_published,ac@5.15_dev_pct\nindoor-c,92.5,94.0,-1.6"
            ),
            "{text}"
        );
    }
}
