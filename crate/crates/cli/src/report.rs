//! Verification reports: the same field set rendered as text or JSON.

use gengeo::catalog::Classification;
use gengeo::CheckItem;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Serialize, Clone, Debug)]
pub struct AxiomItem {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl From<CheckItem> for AxiomItem {
    fn from(item: CheckItem) -> Self {
        AxiomItem { name: item.name, pass: item.pass, witness: item.witness }
    }
}

#[derive(Serialize, Clone, Debug, Default)]
pub struct FlagSet {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact_plus: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact_minus: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compatible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gphi_strong: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cokahler: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_closed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_closed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_classical: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub almost: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j1_integrable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j2_integrable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commuting: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_positive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generalized_kahler: Option<bool>,
}

impl FlagSet {
    pub fn from_classification(classification: &Classification) -> FlagSet {
        let mut flags = FlagSet::default();
        match classification {
            Classification::Contact(c) => flags.fill_contact(c),
            Classification::Complex(c) => {
                flags.almost = Some(c.almost);
                flags.integrable = Some(c.integrable);
            }
            Classification::ComplexPair(c) => {
                flags.j1_integrable = Some(c.j1_integrable);
                flags.j2_integrable = Some(c.j2_integrable);
                flags.commuting = Some(c.commuting);
                flags.metric_positive = Some(c.metric_positive);
                flags.generalized_kahler = Some(c.generalized_kahler);
            }
            Classification::Classical(c) => {
                flags.eta_closed = Some(c.eta_closed);
                flags.omega_closed = Some(c.omega_closed);
                flags.normal_classical = Some(c.normal_classical);
                flags.fill_contact(&c.contact);
            }
        }
        flags
    }

    fn fill_contact(&mut self, c: &gengeo::catalog::ContactFlags) {
        self.contact_plus = Some(c.contact_plus);
        self.contact_minus = Some(c.contact_minus);
        self.strong = Some(c.strong);
        self.normal = Some(c.normal);
        self.metric_ok = c.metric_ok;
        self.compatible = c.compatible;
        self.gphi_strong = c.gphi_strong;
        self.cokahler = c.cokahler;
    }

    /// Field-for-field view used by the text renderer, keeping the two
    /// output formats aligned.
    pub fn entries(&self) -> Vec<(&'static str, bool)> {
        let mut out = Vec::new();
        let mut push = |name, value: Option<bool>| {
            if let Some(v) = value {
                out.push((name, v));
            }
        };
        push("contact_plus", self.contact_plus);
        push("contact_minus", self.contact_minus);
        push("strong", self.strong);
        push("normal", self.normal);
        push("metric_ok", self.metric_ok);
        push("compatible", self.compatible);
        push("gphi_strong", self.gphi_strong);
        push("cokahler", self.cokahler);
        push("eta_closed", self.eta_closed);
        push("omega_closed", self.omega_closed);
        push("normal_classical", self.normal_classical);
        push("almost", self.almost);
        push("integrable", self.integrable);
        push("j1_integrable", self.j1_integrable);
        push("j2_integrable", self.j2_integrable);
        push("commuting", self.commuting);
        push("metric_positive", self.metric_positive);
        push("generalized_kahler", self.generalized_kahler);
        out
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub id: String,
    pub frame_ok: bool,
    pub axioms: Vec<AxiomItem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<FlagSet>,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    pub fn failed(&self) -> bool {
        !self.frame_ok || self.axioms.iter().any(|a| !a.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(self).expect("report serializes")
            }
            Format::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "input: {}", self.id);
                let _ = writeln!(out, "frame: {}", if self.frame_ok { "ok" } else { "INVALID" });
                if !self.axioms.is_empty() {
                    let _ = writeln!(out, "axioms:");
                    for item in &self.axioms {
                        let status = if item.pass { "pass" } else { "FAIL" };
                        match &item.witness {
                            Some(w) => {
                                let _ = writeln!(out, "  [{status}] {}: {w}", item.name);
                            }
                            None => {
                                let _ = writeln!(out, "  [{status}] {}", item.name);
                            }
                        }
                    }
                }
                if let Some(flags) = &self.flags {
                    let _ = writeln!(out, "flags:");
                    for (name, value) in flags.entries() {
                        let _ = writeln!(out, "  {name}: {value}");
                    }
                }
                if !self.witnesses.is_empty() {
                    let _ = writeln!(out, "witnesses:");
                    for w in &self.witnesses {
                        let _ = writeln!(out, "  - {w}");
                    }
                }
                out
            }
        }
    }
}
