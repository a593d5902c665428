//! Core domain types, CSV ingestion and stratified partitioning.
//!
//! Every other module consumes [`Instance`]s. The two data pools of an audit
//! are a set of [`DecisionSet`]s (one per human, carrying decisions) and a
//! single [`GoldStandardSet`] (carrying gold labels), which must not share
//! instances.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeded_rng;

/// Binary sensitive attribute. `A` is the value the audit is oriented on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "not_a")]
    NotA,
}

impl Group {
    pub const BOTH: [Group; 2] = [Group::A, Group::NotA];

    pub fn indicator(self) -> f64 {
        match self {
            Group::A => 1.0,
            Group::NotA => 0.0,
        }
    }

    pub fn other(self) -> Group {
        match self {
            Group::A => Group::NotA,
            Group::NotA => Group::A,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Group::A => "a",
            Group::NotA => "not_a",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Identity of an instance: which dataset it came from and its source row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InstanceId {
    pub dataset: u32,
    pub row: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub id: InstanceId,
    pub features: Vec<f64>,
    pub group: Group,
    pub gold_label: Option<bool>,
    pub decision: Option<bool>,
}

impl Instance {
    pub fn new(id: InstanceId, features: Vec<f64>, group: Group) -> Self {
        Self {
            id,
            features,
            group,
            gold_label: None,
            decision: None,
        }
    }

    pub fn with_gold_label(mut self, label: bool) -> Self {
        self.gold_label = Some(label);
        self
    }

    pub fn with_decision(mut self, decision: bool) -> Self {
        self.decision = Some(decision);
        self
    }

    /// Model input: the feature vector followed by the group indicator.
    pub fn design_row(&self) -> Vec<f64> {
        let mut row = Vec::with_capacity(self.features.len() + 1);
        row.extend_from_slice(&self.features);
        row.push(self.group.indicator());
        row
    }
}

/// The instances one human decided on, `S_{H^k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionSet {
    pub human_id: String,
    instances: Vec<Instance>,
}

impl DecisionSet {
    pub fn new(human_id: impl Into<String>, instances: Vec<Instance>) -> Result<Self> {
        let human_id = human_id.into();
        if instances.is_empty() {
            return Err(Error::Validation(format!(
                "decision set `{human_id}` is empty"
            )));
        }
        if let Some(pos) = instances.iter().position(|i| i.decision.is_none()) {
            return Err(Error::Validation(format!(
                "decision set `{human_id}`: instance {pos} has no decision"
            )));
        }
        for g in Group::BOTH {
            if !instances.iter().any(|i| i.group == g) {
                return Err(Error::Validation(format!(
                    "decision set `{human_id}` has no instances in group {g}"
                )));
            }
        }
        Ok(Self {
            human_id,
            instances,
        })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn decisions(&self) -> Vec<bool> {
        self.instances
            .iter()
            .map(|i| i.decision.expect("validated"))
            .collect()
    }

    pub fn groups(&self) -> Vec<Group> {
        self.instances.iter().map(|i| i.group).collect()
    }

    pub fn design_rows(&self) -> Vec<Vec<f64>> {
        self.instances.iter().map(Instance::design_row).collect()
    }
}

/// The scarce pool with gold-standard labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldStandardSet {
    instances: Vec<Instance>,
}

impl GoldStandardSet {
    pub fn new(instances: Vec<Instance>) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::Validation("gold-standard set is empty".into()));
        }
        if let Some(pos) = instances.iter().position(|i| i.gold_label.is_none()) {
            return Err(Error::Validation(format!(
                "gold-standard instance {pos} has no gold label"
            )));
        }
        for g in Group::BOTH {
            for label in [false, true] {
                if !instances
                    .iter()
                    .any(|i| i.group == g && i.gold_label == Some(label))
                {
                    return Err(Error::Validation(format!(
                        "gold-standard set has no instances with group {g} and label {}",
                        u8::from(label)
                    )));
                }
            }
        }
        Ok(Self { instances })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.instances
            .iter()
            .map(|i| i.gold_label.expect("validated"))
            .collect()
    }

    pub fn groups(&self) -> Vec<Group> {
        self.instances.iter().map(|i| i.group).collect()
    }

    pub fn design_rows(&self) -> Vec<Vec<f64>> {
        self.instances.iter().map(Instance::design_row).collect()
    }

    pub fn ids(&self) -> BTreeSet<InstanceId> {
        self.instances.iter().map(|i| i.id).collect()
    }
}

fn default_missing_values() -> Vec<String> {
    vec![String::new(), "?".into(), "NA".into()]
}

/// Column layout of a CSV file, supplied as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSchema {
    pub feature_names: Vec<String>,
    /// Feature columns that are one-hot encoded instead of parsed as reals.
    #[serde(default)]
    pub categorical_features: Vec<String>,
    pub group_column: String,
    /// The cell value mapped to [`Group::A`]; any other value maps to `NotA`.
    pub group_positive_value: String,
    #[serde(default)]
    pub label_column: Option<String>,
    /// When unset, label cells must read `0`/`1`/`true`/`false`.
    #[serde(default)]
    pub label_positive_value: Option<String>,
    #[serde(default)]
    pub decision_column: Option<String>,
    #[serde(default)]
    pub decision_positive_value: Option<String>,
    /// Optional column carrying a stable row identifier.
    #[serde(default)]
    pub id_column: Option<String>,
    #[serde(default)]
    pub dataset_id: u32,
    #[serde(default = "default_missing_values")]
    pub missing_values: Vec<String>,
}

impl DatasetSchema {
    pub fn new(
        feature_names: Vec<String>,
        group_column: impl Into<String>,
        group_positive_value: impl Into<String>,
    ) -> Self {
        Self {
            feature_names,
            categorical_features: Vec::new(),
            group_column: group_column.into(),
            group_positive_value: group_positive_value.into(),
            label_column: None,
            label_positive_value: None,
            decision_column: None,
            decision_positive_value: None,
            id_column: None,
            dataset_id: 0,
            missing_values: default_missing_values(),
        }
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let schema: Self = serde_json::from_str(&text)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let named = self
            .feature_names
            .iter()
            .chain(std::iter::once(&self.group_column))
            .chain(self.label_column.iter())
            .chain(self.decision_column.iter())
            .chain(self.id_column.iter());
        for name in named {
            if !seen.insert(name.as_str()) {
                return Err(Error::Schema {
                    column: name.clone(),
                    reason: "column named more than once in schema".into(),
                });
            }
        }
        for cat in &self.categorical_features {
            if !self.feature_names.contains(cat) {
                return Err(Error::Schema {
                    column: cat.clone(),
                    reason: "categorical column is not a declared feature".into(),
                });
            }
        }
        Ok(())
    }

    fn is_missing(&self, cell: &str) -> bool {
        self.missing_values.iter().any(|m| m == cell.trim())
    }
}

/// Instances plus the encoded feature names (after one-hot expansion).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub instances: Vec<Instance>,
}

impl Dataset {
    pub fn arity(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }

    /// Schema matching the layout written by [`write_csv`].
    pub fn csv_schema(&self) -> DatasetSchema {
        let mut schema =
            DatasetSchema::new(self.feature_names.clone(), GROUP_COLUMN, Group::A.label());
        schema.label_column = Some(LABEL_COLUMN.into());
        schema.decision_column = Some(DECISION_COLUMN.into());
        schema.id_column = Some(ID_COLUMN.into());
        schema.dataset_id = self.instances.first().map_or(0, |i| i.id.dataset);
        schema
    }
}

pub const ID_COLUMN: &str = "row_id";
pub const GROUP_COLUMN: &str = "group";
pub const LABEL_COLUMN: &str = "gold_label";
pub const DECISION_COLUMN: &str = "decision";

pub fn ingest_csv(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<Dataset> {
    let file = std::fs::File::open(path.as_ref())?;
    ingest_reader(file, schema)
}

pub fn ingest_reader<R: Read>(reader: R, schema: &DatasetSchema) -> Result<Dataset> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::Fields)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema {
                column: name.to_string(),
                reason: "not present in header".into(),
            })
    };

    let feature_cols: Vec<usize> = schema
        .feature_names
        .iter()
        .map(|f| column(f))
        .collect::<Result<_>>()?;
    let group_col = column(&schema.group_column)?;
    let label_col = schema.label_column.as_deref().map(column).transpose()?;
    let decision_col = schema.decision_column.as_deref().map(column).transpose()?;
    let id_col = schema.id_column.as_deref().map(column).transpose()?;

    let mut rows = Vec::new();
    let mut dropped = 0usize;
    for (row_index, record) in rdr.records().enumerate() {
        let record = record?;
        if feature_cols
            .iter()
            .any(|&c| schema.is_missing(record.get(c).unwrap_or("")))
        {
            dropped += 1;
            continue;
        }
        rows.push((row_index, record));
    }
    if dropped > 0 {
        log::info!("dropped {dropped} rows with missing feature values");
    }

    let group_values: BTreeSet<&str> = rows
        .iter()
        .map(|(_, r)| r.get(group_col).unwrap_or(""))
        .collect();
    if group_values.len() > 2 {
        return Err(Error::Validation(format!(
            "group column `{}` has {} distinct values, expected at most 2",
            schema.group_column,
            group_values.len()
        )));
    }
    if group_values.len() == 2 && !group_values.contains(schema.group_positive_value.as_str()) {
        return Err(Error::Validation(format!(
            "group column `{}` does not contain the declared value `{}`",
            schema.group_column, schema.group_positive_value
        )));
    }

    // Lexicographically ordered categories per categorical feature.
    let mut categories: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for (name, &col) in schema.feature_names.iter().zip(&feature_cols) {
        if schema.categorical_features.contains(name) {
            let values: BTreeSet<String> = rows
                .iter()
                .map(|(_, r)| r.get(col).unwrap_or("").to_string())
                .collect();
            categories.insert(name.as_str(), values.into_iter().collect());
        }
    }

    let mut feature_names = Vec::new();
    for name in &schema.feature_names {
        match categories.get(name.as_str()) {
            Some(values) => {
                feature_names.extend(values.iter().map(|v| format!("{name}={v}")));
            }
            None => feature_names.push(name.clone()),
        }
    }

    let mut instances = Vec::with_capacity(rows.len());
    for (row_index, record) in &rows {
        let cell = |c: usize| record.get(c).unwrap_or("");
        let mut features = Vec::with_capacity(feature_names.len());
        for (name, &col) in schema.feature_names.iter().zip(&feature_cols) {
            let raw = cell(col);
            match categories.get(name.as_str()) {
                Some(values) => {
                    features.extend(values.iter().map(|v| f64::from(u8::from(v == raw))));
                }
                None => features.push(parse_real(raw, *row_index, name)?),
            }
        }
        let group = if cell(group_col) == schema.group_positive_value {
            Group::A
        } else {
            Group::NotA
        };
        let row = match id_col {
            Some(c) => cell(c).parse::<u64>().map_err(|_| Error::Parse {
                row: *row_index,
                column: schema.id_column.clone().unwrap_or_default(),
                value: cell(c).to_string(),
            })?,
            None => *row_index as u64,
        };
        let mut instance = Instance::new(
            InstanceId {
                dataset: schema.dataset_id,
                row,
            },
            features,
            group,
        );
        if let Some(c) = label_col {
            instance.gold_label = parse_binary(
                cell(c),
                schema.label_positive_value.as_deref(),
                schema,
                *row_index,
                schema.label_column.as_deref().unwrap_or_default(),
            )?;
        }
        if let Some(c) = decision_col {
            instance.decision = parse_binary(
                cell(c),
                schema.decision_positive_value.as_deref(),
                schema,
                *row_index,
                schema.decision_column.as_deref().unwrap_or_default(),
            )?;
        }
        instances.push(instance);
    }

    Ok(Dataset {
        feature_names,
        instances,
    })
}

fn parse_real(raw: &str, row: usize, column: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            row,
            column: column.to_string(),
            value: raw.to_string(),
        })
}

fn parse_binary(
    raw: &str,
    positive: Option<&str>,
    schema: &DatasetSchema,
    row: usize,
    column: &str,
) -> Result<Option<bool>> {
    if schema.is_missing(raw) {
        return Ok(None);
    }
    if let Some(positive) = positive {
        return Ok(Some(raw == positive));
    }
    match raw.trim().to_ascii_lowercase().as_str() {
        "1" | "true" => Ok(Some(true)),
        "0" | "false" => Ok(Some(false)),
        _ => Err(Error::Parse {
            row,
            column: column.to_string(),
            value: raw.to_string(),
        }),
    }
}

/// Writes instances in the layout described by [`Dataset::csv_schema`].
/// Reals are printed with shortest round-trip formatting.
pub fn write_csv<W: Write>(writer: W, feature_names: &[String], instances: &[Instance]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = vec![ID_COLUMN];
    header.extend(feature_names.iter().map(String::as_str));
    header.extend([GROUP_COLUMN, LABEL_COLUMN, DECISION_COLUMN]);
    wtr.write_record(&header)?;
    let binary = |v: Option<bool>| match v {
        Some(true) => "1".to_string(),
        Some(false) => "0".to_string(),
        None => String::new(),
    };
    for inst in instances {
        if inst.features.len() != feature_names.len() {
            return Err(Error::Arity {
                expected: feature_names.len(),
                got: inst.features.len(),
            });
        }
        let mut record = Vec::with_capacity(header.len());
        record.push(inst.id.row.to_string());
        record.extend(inst.features.iter().map(|v| v.to_string()));
        record.push(inst.group.label().to_string());
        record.push(binary(inst.gold_label));
        record.push(binary(inst.decision));
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Strata are keyed by group and gold label, visited in a fixed order.
fn strata(instances: &[Instance]) -> BTreeMap<(Group, Option<bool>), Vec<usize>> {
    let mut map: BTreeMap<(Group, Option<bool>), Vec<usize>> = BTreeMap::new();
    for (i, inst) in instances.iter().enumerate() {
        map.entry((inst.group, inst.gold_label)).or_default().push(i);
    }
    map
}

fn stratum_name(key: &(Group, Option<bool>)) -> String {
    let label = match key.1 {
        Some(true) => "1",
        Some(false) => "0",
        None => "unlabeled",
    };
    format!("(group={}, label={label})", key.0)
}

/// Splits instances into `k_parts` disjoint parts, stratified by
/// `(group, gold_label)`.
///
/// Each stratum is shuffled and dealt round-robin; the dealing position
/// carries over between strata so that part totals also stay within one.
pub fn stratified_partition(
    instances: &[Instance],
    k_parts: usize,
    seed: u64,
) -> Result<Vec<Vec<Instance>>> {
    if k_parts == 0 {
        return Err(Error::Config("k_parts must be at least 1".into()));
    }
    let mut parts: Vec<Vec<Instance>> = vec![Vec::new(); k_parts];
    let mut cursor = 0usize;
    for (stream, (key, mut members)) in strata(instances).into_iter().enumerate() {
        if members.len() < k_parts {
            return Err(Error::Partition {
                stratum: stratum_name(&key),
                size: members.len(),
                needed: k_parts,
            });
        }
        members.shuffle(&mut seeded_rng(seed, stream as u64));
        for idx in members {
            parts[cursor % k_parts].push(instances[idx].clone());
            cursor += 1;
        }
    }
    Ok(parts)
}

/// Draws `per_group` labeled instances from each group without replacement,
/// keeping each group's class prevalence (rounded).
///
/// Each `(group, class)` stratum is shuffled with its own stream of `seed`,
/// so for a fixed seed the pool for a smaller `per_group` is a subset of the
/// pool for a larger one.
pub fn sample_gs_pool(
    instances: &[Instance],
    per_group: usize,
    seed: u64,
) -> Result<GoldStandardSet> {
    if per_group == 0 {
        return Err(Error::Config("per_group must be positive".into()));
    }
    let mut chosen = Vec::with_capacity(2 * per_group);
    for (g_idx, group) in Group::BOTH.into_iter().enumerate() {
        let labeled: Vec<&Instance> = instances
            .iter()
            .filter(|i| i.group == group && i.gold_label.is_some())
            .collect();
        if labeled.len() < per_group {
            return Err(Error::Sampling(format!(
                "group {group} has {} labeled instances, need {per_group}",
                labeled.len()
            )));
        }
        let positives = labeled.iter().filter(|i| i.gold_label == Some(true)).count();
        let take_pos =
            ((per_group as f64) * positives as f64 / labeled.len() as f64).round() as usize;
        let take_neg = per_group - take_pos;
        for (c_idx, (label, take)) in [(true, take_pos), (false, take_neg)].into_iter().enumerate()
        {
            let mut stratum: Vec<&Instance> = labeled
                .iter()
                .copied()
                .filter(|i| i.gold_label == Some(label))
                .collect();
            if stratum.len() < take {
                return Err(Error::Sampling(format!(
                    "group {group} has {} instances with label {}, need {take}",
                    stratum.len(),
                    u8::from(label)
                )));
            }
            stratum.shuffle(&mut seeded_rng(seed, (2 * g_idx + c_idx) as u64));
            chosen.extend(stratum.into_iter().take(take).cloned());
        }
    }
    GoldStandardSet::new(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(row: u64, group: Group, label: bool) -> Instance {
        Instance::new(InstanceId { dataset: 0, row }, vec![row as f64], group).with_gold_label(label)
    }

    /// 50 per group, 20 positives per group.
    fn hundred() -> Vec<Instance> {
        (0..100)
            .map(|i| {
                let group = if i < 50 { Group::A } else { Group::NotA };
                inst(i, group, i % 50 < 20)
            })
            .collect()
    }

    #[test]
    fn ingest_small_file_with_label_mapping() {
        let csv = "age,sex,income\n39,Female,>50K\n50,Male,<=50K\n38,Female,<=50K\n";
        let mut schema = DatasetSchema::new(vec!["age".into()], "sex", "Female");
        schema.label_column = Some("income".into());
        schema.label_positive_value = Some(">50K".into());
        let ds = ingest_reader(csv.as_bytes(), &schema).unwrap();
        assert_eq!(ds.instances.len(), 3);
        assert_eq!(ds.feature_names, vec!["age".to_string()]);
        let labels: Vec<_> = ds.instances.iter().map(|i| i.gold_label).collect();
        assert_eq!(labels, vec![Some(true), Some(false), Some(false)]);
        let groups: Vec<_> = ds.instances.iter().map(|i| i.group).collect();
        assert_eq!(groups, vec![Group::A, Group::NotA, Group::A]);
        assert!(ds.instances.iter().all(|i| i.decision.is_none()));
    }

    #[test]
    fn three_group_values_rejected() {
        let csv = "x,g\n1,u\n2,v\n3,w\n";
        let schema = DatasetSchema::new(vec!["x".into()], "g", "u");
        assert!(matches!(
            ingest_reader(csv.as_bytes(), &schema),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn missing_column_is_named() {
        let csv = "x,g\n1,u\n";
        let schema = DatasetSchema::new(vec!["x".into(), "y".into()], "g", "u");
        match ingest_reader(csv.as_bytes(), &schema) {
            Err(Error::Schema { column, .. }) => assert_eq!(column, "y"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unparseable_numeric_reports_row() {
        let csv = "x,g\n1,u\nabc,v\n";
        let schema = DatasetSchema::new(vec!["x".into()], "g", "u");
        match ingest_reader(csv.as_bytes(), &schema) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 1);
                assert_eq!(column, "x");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_rows_dropped_and_categoricals_sorted() {
        let csv = "x,color,g\n1,red,u\n?,blue,v\n3,blue,v\n4,green,u\n";
        let mut schema = DatasetSchema::new(vec!["x".into(), "color".into()], "g", "u");
        schema.categorical_features = vec!["color".into()];
        let ds = ingest_reader(csv.as_bytes(), &schema).unwrap();
        assert_eq!(ds.instances.len(), 3);
        assert_eq!(
            ds.feature_names,
            vec!["x", "color=blue", "color=green", "color=red"]
        );
        assert_eq!(ds.instances[0].features, vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(ds.instances[1].features, vec![3.0, 1.0, 0.0, 0.0]);
        // Source row index survives dropping.
        assert_eq!(ds.instances[2].id.row, 3);
    }

    #[test]
    fn group_column_among_features_rejected() {
        let schema = DatasetSchema::new(vec!["x".into(), "g".into()], "g", "u");
        assert!(matches!(schema.validate(), Err(Error::Schema { .. })));
    }

    #[test]
    fn partition_four_ways_balances_every_stratum() {
        let data = hundred();
        let parts = stratified_partition(&data, 4, 7).unwrap();
        assert_eq!(parts.len(), 4);
        for part in &parts {
            assert_eq!(part.len(), 25);
            for g in Group::BOTH {
                let pos = part
                    .iter()
                    .filter(|i| i.group == g && i.gold_label == Some(true))
                    .count();
                assert_eq!(pos, 5);
            }
        }
        let mut rows: Vec<u64> = parts.iter().flatten().map(|i| i.id.row).collect();
        rows.sort_unstable();
        assert_eq!(rows, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn partition_single_part_and_determinism() {
        let data = hundred();
        let one = stratified_partition(&data, 1, 3).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].len(), 100);
        assert_eq!(
            stratified_partition(&data, 3, 11).unwrap(),
            stratified_partition(&data, 3, 11).unwrap()
        );
    }

    #[test]
    fn partition_small_stratum_errors() {
        let data = hundred();
        assert!(matches!(
            stratified_partition(&data, 25, 0),
            Err(Error::Partition { .. })
        ));
    }

    #[test]
    fn gs_pool_counts() {
        // 500 per group, 20% positive.
        let data: Vec<Instance> = (0..1000)
            .map(|i| {
                let group = if i % 2 == 0 { Group::A } else { Group::NotA };
                inst(i, group, (i / 2) % 5 == 0)
            })
            .collect();
        let gs = sample_gs_pool(&data, 100, 1).unwrap();
        assert_eq!(gs.len(), 200);
        for g in Group::BOTH {
            let members: Vec<_> = gs.instances().iter().filter(|i| i.group == g).collect();
            assert_eq!(members.len(), 100);
            assert_eq!(members.iter().filter(|i| i.gold_label == Some(true)).count(), 20);
        }
        let full = sample_gs_pool(&data, 500, 1).unwrap();
        assert_eq!(full.ids(), data.iter().map(|i| i.id).collect());
        assert!(matches!(sample_gs_pool(&data, 501, 1), Err(Error::Sampling(_))));
    }

    #[test]
    fn gs_pools_are_nested_for_fixed_seed() {
        let data: Vec<Instance> = (0..2000)
            .map(|i| {
                let group = if i % 2 == 0 { Group::A } else { Group::NotA };
                inst(i, group, (i / 2) % 10 < 3)
            })
            .collect();
        let small = sample_gs_pool(&data, 100, 9).unwrap().ids();
        let large = sample_gs_pool(&data, 400, 9).unwrap().ids();
        assert!(small.is_subset(&large));
    }
}
