//! Transport-independent request handling shared by the CLI and the HTTP
//! service, so both produce the same bytes for the same request.

use ctprof_core::analyzer::{analyze, diff_profiles, AnalysisReport, ProfileDiff};
use ctprof_core::catalog::catalog_document;
use ctprof_core::corpus::{
    characteristics_taxonomy, competencies_taxonomy, Corpus, TaxonomyKind, TaxonomyTable,
};
use ctprof_core::descriptor::{
    derive_characteristics, descriptor_from_value, validate_descriptor, Descriptor, DescriptorError,
};
use ctprof_core::designer::{design, DesignError, DesignQuery, DesignSolution};
use ctprof_core::profile::CharacteristicProfile;
use ctprof_core::ruleset::Ruleset;
use ctprof_core::schema::{parse_json, to_canonical_json, Issues, SyntaxError, ValidationIssue};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApiError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{message}")]
    Invalid {
        message: String,
        issues: Vec<ValidationIssue>,
    },
    #[error("unknown fixture `{0}`")]
    NotFound(String),
}

impl ApiError {
    fn invalid(message: impl Into<String>, issues: Vec<ValidationIssue>) -> Self {
        ApiError::Invalid {
            message: message.into(),
            issues,
        }
    }

    pub fn issues(&self) -> &[ValidationIssue] {
        match self {
            ApiError::Invalid { issues, .. } => issues,
            _ => &[],
        }
    }

    /// `{"error": ..., "issues": [...]}` as canonical JSON.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            error: String,
            issues: &'a [ValidationIssue],
        }
        to_canonical_json(&Body {
            error: self.to_string(),
            issues: self.issues(),
        })
    }
}

impl From<DescriptorError> for ApiError {
    fn from(e: DescriptorError) -> Self {
        match e {
            DescriptorError::Parse(s) => ApiError::Syntax(s),
            DescriptorError::Schema(issues) => {
                ApiError::invalid("descriptor does not match the schema", issues)
            }
            other => ApiError::invalid(other.to_string(), Vec::new()),
        }
    }
}

impl From<DesignError> for ApiError {
    fn from(e: DesignError) -> Self {
        match e {
            DesignError::Parse(s) => ApiError::Syntax(s),
            DesignError::Schema(issues) => {
                ApiError::invalid("design query does not match the schema", issues)
            }
            other => ApiError::invalid(other.to_string(), Vec::new()),
        }
    }
}

/// An input document: a full descriptor or a bare characteristic profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Descriptor(Box<Descriptor>),
    Profile(CharacteristicProfile),
}

/// Reads a document. Objects with a `components` key are descriptors and must
/// also pass validation.
pub fn read_document(text: &str) -> Result<Document, ApiError> {
    let value = parse_json(text)?;
    if value.get("components").is_some() {
        let d = descriptor_from_value(&value)
            .map_err(|issues| ApiError::invalid("descriptor does not match the schema", issues))?;
        let issues = validate_descriptor(&d);
        if !issues.is_empty() {
            return Err(ApiError::invalid("descriptor failed validation", issues));
        }
        Ok(Document::Descriptor(Box::new(d)))
    } else {
        let mut issues = Issues::default();
        let p = CharacteristicProfile::from_json_value(&value, "", &mut issues);
        let p = issues
            .into_result(p)
            .map_err(|i| ApiError::invalid("profile does not match the schema", i))?;
        Ok(Document::Profile(p))
    }
}

pub fn profile_of(doc: &Document) -> Result<CharacteristicProfile, ApiError> {
    match doc {
        Document::Descriptor(d) => Ok(derive_characteristics(d)?),
        Document::Profile(p) => Ok(*p),
    }
}

pub fn profile_text(text: &str) -> Result<CharacteristicProfile, ApiError> {
    profile_of(&read_document(text)?)
}

pub fn analyze_text(text: &str, rules: &Ruleset) -> Result<AnalysisReport, ApiError> {
    Ok(analyze(&profile_text(text)?, rules))
}

/// Derivation needs a descriptor; a bare profile is rejected.
pub fn derive_text(text: &str) -> Result<CharacteristicProfile, ApiError> {
    match read_document(text)? {
        Document::Descriptor(d) => Ok(derive_characteristics(&d)?),
        Document::Profile(_) => Err(ApiError::invalid(
            "expected a descriptor, got a profile",
            Vec::new(),
        )),
    }
}

pub fn diff_texts(a: &str, b: &str, rules: &Ruleset) -> Result<ProfileDiff, ApiError> {
    Ok(diff_profiles(&profile_text(a)?, &profile_text(b)?, rules))
}

pub fn design_value(query: &Value, rules: &Ruleset) -> Result<DesignSolution, ApiError> {
    let q = DesignQuery::from_json_value(query)?;
    Ok(design(&q, rules)?)
}

pub fn design_text(text: &str, rules: &Ruleset) -> Result<DesignSolution, ApiError> {
    design_value(&parse_json(text)?, rules)
}

pub fn taxonomy(
    corpus: &Corpus,
    rules: &Ruleset,
    kind: TaxonomyKind,
    collapse_groups: bool,
) -> TaxonomyTable {
    match kind {
        TaxonomyKind::Characteristics => characteristics_taxonomy(corpus),
        TaxonomyKind::Competencies => competencies_taxonomy(corpus, rules, collapse_groups),
    }
}

pub fn catalog_json() -> String {
    to_canonical_json(&catalog_document())
}

pub fn fixture_names(corpus: &Corpus) -> Vec<&str> {
    corpus.entries.iter().map(|e| e.name.as_str()).collect()
}

pub fn fixtures_json(corpus: &Corpus) -> String {
    to_canonical_json(&fixture_names(corpus))
}

pub fn fixture_json(corpus: &Corpus, name: &str) -> Result<String, ApiError> {
    let entry = corpus
        .entry(name)
        .ok_or_else(|| ApiError::NotFound(name.to_string()))?;
    Ok(to_canonical_json(&entry.descriptor))
}
