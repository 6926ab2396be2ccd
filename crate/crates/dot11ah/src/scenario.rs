//! TOML profile documents and scenario files.
//!
//! A profile document names its base with `id` and overrides any other
//! [`StandardProfile`] field by its exact name:
//!
//! ```toml
//! id = "ah-long-header"
//! tx_power_dbm = 20.0
//! max_psdu_bytes = "none"   # clears an optional cap
//! ```
//!
//! A scenario file nests the same keys under `[profile]` and adds a
//! `[sweep]` table:
//!
//! ```toml
//! [profile]
//! id = "ac"
//!
//! [sweep]
//! preset = "5.45"
//! payload = { start = 12, end = 1500, step = 4 }
//! per = [0.0, 0.5]
//! aggregation = "auto"      # "off", "auto" or a fixed K
//! ack = "block-ack"
//! delta_us = 0.0
//! gi = "short"
//! ```

use dot11ah_core::profiles::{builtin_profile, FieldValue, ProfileId, StandardProfile};
use serde::Deserialize;
use toml::{Table, Value};

use crate::error::{Error, Result};

/// Parses a profile document and returns the base profile with its
/// overrides applied. Invariants are checked after the merge.
pub fn load_profile_overrides(document: &str) -> Result<StandardProfile> {
    let table: Table = toml::from_str(document)?;
    profile_from_table(&table)
}

pub fn profile_from_table(table: &Table) -> Result<StandardProfile> {
    let id = match table.get("id") {
        Some(Value::String(label)) => label.parse::<ProfileId>()?,
        Some(_) => {
            return Err(Error::Scenario(
                "`id` must be a profile label string".into(),
            ))
        }
        None => {
            return Err(Error::Scenario(
                "profile document needs an `id` naming the base profile".into(),
            ))
        }
    };
    let mut profile = builtin_profile(id);
    for (key, value) in table.iter().filter(|(k, _)| k.as_str() != "id") {
        let value = match value {
            Value::Integer(v) => FieldValue::Integer(*v),
            Value::Float(v) => FieldValue::Float(*v),
            Value::String(s) => FieldValue::Text(s),
            other => {
                return Err(Error::Scenario(format!(
                    "`{key}` must be a number or string, found {}",
                    other.type_str()
                )))
            }
        };
        profile.set_field(key, value)?;
    }
    profile.validate()?;
    Ok(profile)
}

/// Serializes every field, so that loading the result reproduces `profile`.
pub fn profile_to_toml(profile: &StandardProfile) -> String {
    let mut table = Table::new();
    for (key, value) in profile.field_values() {
        let value = match value {
            FieldValue::Integer(v) => Value::Integer(v),
            FieldValue::Float(v) => Value::Float(v),
            FieldValue::Text(s) => Value::String(s.to_owned()),
        };
        table.insert(key.to_owned(), value);
    }
    toml::to_string(&table).expect("profile fields are plain scalars")
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayloadRangeDoc {
    pub start: u32,
    pub end: u32,
    #[serde(default = "one")]
    pub step: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AggregationDoc {
    Fixed(u32),
    Mode(String),
}

/// The `[sweep]` table. Every field is optional; command-line flags win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub preset: Option<String>,
    pub payload: Option<PayloadRangeDoc>,
    pub per: Option<Vec<f64>>,
    pub aggregation: Option<AggregationDoc>,
    pub ack: Option<String>,
    pub delta_us: Option<f64>,
    pub gi: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub profile: StandardProfile,
    pub sweep: SweepDoc,
}

pub fn load_scenario(text: &str) -> Result<Scenario> {
    let mut table: Table = toml::from_str(text)?;
    for key in table.keys() {
        if key != "profile" && key != "sweep" {
            return Err(Error::Scenario(format!(
                "unknown section `{key}`; expected [profile] and [sweep]"
            )));
        }
    }
    let profile = match table.remove("profile") {
        Some(Value::Table(t)) => profile_from_table(&t)?,
        Some(_) => return Err(Error::Scenario("`profile` must be a table".into())),
        None => return Err(Error::Scenario("scenario needs a [profile] table".into())),
    };
    let sweep = match table.remove("sweep") {
        Some(value) => value
            .try_into()
            .map_err(|e: toml::de::Error| Error::Scenario(format!("[sweep]: {}", e.message())))?,
        None => SweepDoc::default(),
    };
    Ok(Scenario { profile, sweep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_field_override() {
        let p = load_profile_overrides("id = \"ah-long-header\"\ntx_power_dbm = 20\n").unwrap();
        let base = builtin_profile(ProfileId::AhLongHeader);
        assert_eq!(
            p,
            StandardProfile {
                tx_power_dbm: 20.0,
                ..base
            }
        );
    }

    #[test]
    fn invariant_violation_after_merge() {
        let err = load_profile_overrides("id = \"ac\"\ncw_max = 7\n").unwrap_err();
        assert!(err.to_string().contains("cw_min < cw_max"), "{err}");
    }

    #[test]
    fn identity_document() {
        let p = load_profile_overrides("id = \"a\"").unwrap();
        assert_eq!(p, builtin_profile(ProfileId::A));
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let err = load_profile_overrides("id = \"a\"\nslot = 9\n").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("`slot`") && msg.contains("t_slot_us") && msg.contains("ack_scheme"),
            "{msg}"
        );
    }

    #[test]
    fn missing_or_bad_id() {
        assert!(load_profile_overrides("sifs_us = 10").is_err());
        assert!(matches!(
            load_profile_overrides("id = \"11ax\""),
            Err(Error::Model(dot11ah_core::Error::UnknownProfile(_)))
        ));
        assert!(load_profile_overrides("id = 3").is_err());
        assert!(load_profile_overrides("id = \"a\"\ncw_min = [1]").is_err());
    }

    #[test]
    fn builtins_round_trip() {
        for id in ProfileId::ALL {
            let p = builtin_profile(id);
            assert_eq!(load_profile_overrides(&profile_to_toml(&p)).unwrap(), p);
        }
    }

    #[test]
    fn scenario_sections() {
        let s = load_scenario(
            r#"
            [profile]
            id = "ac"
            [sweep]
            preset = "5.45"
            payload = { start = 12, end = 1500, step = 4 }
            per = [0.0, 0.5]
            aggregation = 3
            gi = "short"
            "#,
        )
        .unwrap();
        assert_eq!(s.profile, builtin_profile(ProfileId::Ac));
        assert_eq!(s.sweep.aggregation, Some(AggregationDoc::Fixed(3)));
        assert_eq!(s.sweep.payload.unwrap().step, 4);

        assert!(load_scenario("[profile]\nid = \"ac\"\n[sweep]\nfoo = 1\n").is_err());
        assert!(load_scenario("[sweep]\nper = [0.1]\n").is_err());
        assert!(load_scenario("[profile]\nid = \"ac\"\n[extra]\n").is_err());
    }
}
