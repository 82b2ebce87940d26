//! Property reports and their JSON serialization.

use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Steen,
    Brown,
    Derived,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Status {
    Pass,
    Fail,
    VacuousPass,
    BoundedPass,
}

impl Status {
    pub fn is_fail(self) -> bool {
        matches!(self, Status::Fail)
    }
}

/// A counterexample: the premise members that trigger a property and the
/// consequence that is missing (or, for prohibition properties, present).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub premises: Vec<String>,
    pub missing: String,
}

impl Witness {
    pub fn render(&self) -> String {
        if self.premises.is_empty() {
            self.missing.clone()
        } else {
            format!("{} ==> {}", self.premises.join(" ; "), self.missing)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropertyReport {
    pub property: String,
    pub suite: Suite,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn pass(property: &str, suite: Suite) -> Self {
        PropertyReport {
            property: property.to_string(),
            suite,
            status: Status::Pass,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn fail(property: &str, suite: Suite, witnesses: Vec<Witness>) -> Self {
        PropertyReport {
            property: property.to_string(),
            suite,
            status: Status::Fail,
            witnesses,
            note: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "property": self.property,
            "suite": self.suite,
            "status": self.status,
            "witnesses": self.witnesses.iter().map(|w| w.render()).collect::<Vec<_>>(),
        })
    }
}

/// Sorts by property name; parallel evaluation of individual properties must
/// not change report order.
pub fn sort_reports(mut reports: Vec<PropertyReport>) -> Vec<PropertyReport> {
    reports.sort_by(|a, b| a.property.cmp(&b.property));
    reports
}

pub fn reports_to_json(reports: &[PropertyReport]) -> serde_json::Value {
    serde_json::Value::Array(reports.iter().map(|r| r.to_json()).collect())
}

/// True when nothing failed (vacuous and bounded passes count as passing).
pub fn all_pass(reports: &[PropertyReport]) -> bool {
    reports.iter().all(|r| !r.status.is_fail())
}
