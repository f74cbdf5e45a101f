//! Descriptor corpora and the per-domain taxonomy tables computed over them.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::Value;

use crate::analyzer::rule_activable;
use crate::catalog::{atom_vocabulary, eval_atom, Atom, Competency};
use crate::descriptor::{
    derive_characteristics, parse_descriptor, validate_descriptor, Descriptor, DESCRIPTOR_EXTENSION,
};
use crate::profile::CharacteristicProfile;
use crate::ruleset::Ruleset;
use crate::schema::{
    as_array, as_str, as_u64, index_path, parse_json, Issues, ObjectReader, ValidationIssue,
};
use crate::vocab::{vocab_enum, Domain};

pub const MANIFEST_FILE: &str = "corpus_manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    /// File name without the `.ctp.json` extension.
    pub name: String,
    pub descriptor: Descriptor,
    pub profile: CharacteristicProfile,
    pub source_path: String,
}

impl CorpusEntry {
    /// Units for group collapsing: the group if any, else the entry name.
    pub fn unit_key(&self) -> &str {
        self.descriptor.group.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnownDeviation {
    pub fixture: String,
    pub competency: Competency,
    pub paper_claim: String,
    pub engine_result: String,
    pub citation: String,
}

/// A published taxonomy cell the engine does not reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaxonomyDelta {
    pub kind: TaxonomyKind,
    pub domain: Domain,
    pub row: String,
    pub collapse_groups: bool,
    pub reference_percent: u32,
    pub engine_percent: u32,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CorpusManifest {
    pub known_deviations: Vec<KnownDeviation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub taxonomy_deltas: Vec<TaxonomyDelta>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    pub manifest: CorpusManifest,
}

/// Why one corpus file could not be used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileFailure {
    pub path: String,
    pub message: String,
    pub issues: Vec<ValidationIssue>,
}

impl fmt::Display for FileFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)?;
        for issue in &self.issues {
            write!(f, "\n  {issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("no {DESCRIPTOR_EXTENSION} files in {0}")]
    EmptyCorpus(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{} of {} corpus file(s) failed:\n{}", .failures.len(), .failures.len() + .loaded.len(), failures_text(.failures))]
    Invalid {
        failures: Vec<FileFailure>,
        loaded: Vec<String>,
    },
    #[error("bad corpus manifest: {0}")]
    Manifest(String),
    #[error("duplicate entry name `{0}`")]
    DuplicateName(String),
}

fn failures_text(failures: &[FileFailure]) -> String {
    failures
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

fn entry_name(path: &str) -> String {
    let file = path.rsplit(['/', '\\']).next().unwrap_or(path);
    file.strip_suffix(DESCRIPTOR_EXTENSION)
        .unwrap_or(file)
        .to_string()
}

fn load_entry(path: &str, text: &str) -> Result<CorpusEntry, FileFailure> {
    let fail = |message: String, issues: Vec<ValidationIssue>| FileFailure {
        path: path.to_string(),
        message,
        issues,
    };
    let descriptor = parse_descriptor(text).map_err(|e| match e {
        crate::descriptor::DescriptorError::Schema(issues) => fail("schema errors".into(), issues),
        other => fail(other.to_string(), Vec::new()),
    })?;
    let issues = validate_descriptor(&descriptor);
    if !issues.is_empty() {
        return Err(fail("validation failed".into(), issues));
    }
    let profile =
        derive_characteristics(&descriptor).map_err(|e| fail(e.to_string(), Vec::new()))?;
    Ok(CorpusEntry {
        name: entry_name(path),
        descriptor,
        profile,
        source_path: path.to_string(),
    })
}

impl Corpus {
    /// Builds a corpus from `(path, text)` pairs. Entries are sorted by path.
    pub fn from_sources<'a>(
        sources: impl IntoIterator<Item = (&'a str, &'a str)>,
        manifest: Option<&str>,
    ) -> Result<Corpus, CorpusError> {
        let mut sources: Vec<(&str, &str)> = sources.into_iter().collect();
        sources.sort_by(|a, b| a.0.cmp(b.0));
        let mut entries = Vec::new();
        let mut failures = Vec::new();
        for (path, text) in sources {
            match load_entry(path, text) {
                Ok(e) => entries.push(e),
                Err(f) => failures.push(f),
            }
        }
        if !failures.is_empty() {
            return Err(CorpusError::Invalid {
                failures,
                loaded: entries.into_iter().map(|e| e.name).collect(),
            });
        }
        for pair in entries.windows(2) {
            if pair[0].name == pair[1].name {
                return Err(CorpusError::DuplicateName(pair[0].name.clone()));
            }
        }
        let manifest = match manifest {
            Some(text) => parse_manifest(text)?,
            None => CorpusManifest::default(),
        };
        if let Some(d) = manifest
            .known_deviations
            .iter()
            .find(|d| !entries.iter().any(|e| e.name == d.fixture))
        {
            return Err(CorpusError::Manifest(format!(
                "deviation names unknown fixture `{}`",
                d.fixture
            )));
        }
        Ok(Corpus { entries, manifest })
    }

    pub fn entry(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn domain_entries(&self, domain: Domain) -> impl Iterator<Item = &CorpusEntry> {
        self.entries
            .iter()
            .filter(move |e| e.profile.domain == domain)
    }

    /// Domains present in the corpus, in vocabulary order.
    pub fn domains(&self) -> Vec<Domain> {
        Domain::ALL
            .iter()
            .copied()
            .filter(|d| self.domain_entries(*d).next().is_some())
            .collect()
    }
}

/// Loads every `.ctp.json` file in `dir`, plus `corpus_manifest.json` if present.
pub fn load_corpus(dir: &Path) -> Result<Corpus, CorpusError> {
    let io = |path: &Path, e: std::io::Error| CorpusError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.to_string_lossy().ends_with(DESCRIPTOR_EXTENSION))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CorpusError::EmptyCorpus(dir.display().to_string()));
    }
    let mut texts = Vec::with_capacity(paths.len());
    for p in &paths {
        texts.push((
            p.display().to_string(),
            std::fs::read_to_string(p).map_err(|e| io(p, e))?,
        ));
    }
    let manifest_path = dir.join(MANIFEST_FILE);
    let manifest = if manifest_path.is_file() {
        Some(std::fs::read_to_string(&manifest_path).map_err(|e| io(&manifest_path, e))?)
    } else {
        None
    };
    Corpus::from_sources(
        texts.iter().map(|(p, t)| (p.as_str(), t.as_str())),
        manifest.as_deref(),
    )
}

pub fn parse_manifest(text: &str) -> Result<CorpusManifest, CorpusError> {
    let value = parse_json(text).map_err(|e| CorpusError::Manifest(e.to_string()))?;
    let mut issues = Issues::default();
    let manifest = read_manifest(&value, &mut issues);
    issues
        .into_result(manifest)
        .map_err(|issues| CorpusError::Manifest(crate::schema::summarize_issues(&issues)))
}

fn read_manifest(v: &Value, issues: &mut Issues) -> Option<CorpusManifest> {
    let mut r = ObjectReader::new(v, "", issues)?;
    let known = r.required("known_deviations", issues).and_then(|(v, p)| {
        let items = as_array(v, &p, issues)?;
        let mut out = Vec::new();
        for (i, item) in items.iter().enumerate() {
            let mut r = ObjectReader::new(item, &index_path(&p, i), issues)?;
            let fixture = r.req_str("fixture", issues);
            let competency = r.req_enum("competency", issues);
            let paper_claim = r.req_str("paper_claim", issues);
            let engine_result = r.req_str("engine_result", issues);
            let citation = r.req_str("citation", issues);
            r.finish(issues);
            out.push(KnownDeviation {
                fixture: fixture?.to_string(),
                competency: competency?,
                paper_claim: paper_claim?.to_string(),
                engine_result: engine_result?.to_string(),
                citation: citation?.to_string(),
            });
        }
        Some(out)
    });
    let deltas = match r.optional("taxonomy_deltas") {
        None => Some(Vec::new()),
        Some((v, p)) => (|| {
            let items = as_array(v, &p, issues)?;
            let mut out = Vec::new();
            for (i, item) in items.iter().enumerate() {
                let mut r = ObjectReader::new(item, &index_path(&p, i), issues)?;
                let kind = r.req_enum("kind", issues);
                let domain = r.req_enum("domain", issues);
                let row = r.req_str("row", issues);
                let collapse_groups = r.req_bool("collapse_groups", issues);
                let percent = |r: &mut ObjectReader, key, issues: &mut Issues| {
                    r.required(key, issues)
                        .and_then(|(v, p)| as_u64(v, &p, issues))
                        .map(|n| n as u32)
                };
                let reference_percent = percent(&mut r, "reference_percent", issues);
                let engine_percent = percent(&mut r, "engine_percent", issues);
                let note = r
                    .required("note", issues)
                    .and_then(|(v, p)| as_str(v, &p, issues));
                r.finish(issues);
                out.push(TaxonomyDelta {
                    kind: kind?,
                    domain: domain?,
                    row: row?.to_string(),
                    collapse_groups: collapse_groups?,
                    reference_percent: reference_percent?,
                    engine_percent: engine_percent?,
                    note: note?.to_string(),
                });
            }
            Some(out)
        })(),
    };
    r.finish(issues);
    Some(CorpusManifest {
        known_deviations: known?,
        taxonomy_deltas: deltas?,
    })
}

vocab_enum! {
    pub enum TaxonomyKind {
        Characteristics => "characteristics",
        Competencies => "competencies",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TaxonomyCell {
    pub domain: Domain,
    pub percent: u32,
    pub numerator: usize,
    pub denominator: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaxonomyRow {
    /// Atom name or competency id.
    pub row: String,
    /// Atom family, `functionality`, `alias`, or the competency root.
    pub section: String,
    pub cells: Vec<TaxonomyCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaxonomyTable {
    pub kind: TaxonomyKind,
    pub collapse_groups: bool,
    pub domains: Vec<Domain>,
    pub rows: Vec<TaxonomyRow>,
}

impl TaxonomyTable {
    pub fn row(&self, name: &str) -> Option<&TaxonomyRow> {
        self.rows.iter().find(|r| r.row == name)
    }

    pub fn cell(&self, row: &str, domain: Domain) -> Option<&TaxonomyCell> {
        self.row(row)?.cells.iter().find(|c| c.domain == domain)
    }

    pub fn percent(&self, row: &str, domain: Domain) -> Option<u32> {
        self.cell(row, domain).map(|c| c.percent)
    }

    pub fn to_json(&self) -> String {
        crate::schema::to_canonical_json(self)
    }
}

/// Integer percent, rounded half away from zero.
pub fn percent(numerator: usize, denominator: usize) -> u32 {
    assert!(denominator > 0, "percent of an empty domain");
    ((200 * numerator + denominator) / (2 * denominator)) as u32
}

fn cell(domain: Domain, numerator: usize, denominator: usize) -> TaxonomyCell {
    TaxonomyCell {
        domain,
        percent: percent(numerator, denominator),
        numerator,
        denominator,
    }
}

fn atom_section(atom: Atom) -> &'static str {
    match atom {
        Atom::Functionality(_) => "functionality",
        a => a.family().map_or("alias", |f| f.as_str()),
    }
}

/// Share of profiles per domain for which each atom of the vocabulary holds.
pub fn characteristics_taxonomy(c: &Corpus) -> TaxonomyTable {
    let domains = c.domains();
    let rows = atom_vocabulary()
        .into_iter()
        .map(|atom| TaxonomyRow {
            row: atom.name().to_string(),
            section: atom_section(atom).to_string(),
            cells: domains
                .iter()
                .map(|&d| {
                    let profiles: Vec<_> = c.domain_entries(d).map(|e| &e.profile).collect();
                    let hits = profiles.iter().filter(|p| eval_atom(p, atom)).count();
                    cell(d, hits, profiles.len())
                })
                .collect(),
        })
        .collect();
    TaxonomyTable {
        kind: TaxonomyKind::Characteristics,
        collapse_groups: false,
        domains,
        rows,
    }
}

/// Share of units per domain for which each leaf is activable.
///
/// With `collapse_groups`, entries sharing a group form one unit, and the unit
/// counts only when every member is activable.
pub fn competencies_taxonomy(c: &Corpus, rules: &Ruleset, collapse_groups: bool) -> TaxonomyTable {
    let domains = c.domains();
    let units: Vec<Vec<Vec<&CorpusEntry>>> = domains
        .iter()
        .map(|&d| {
            let mut by_key: BTreeMap<&str, Vec<&CorpusEntry>> = BTreeMap::new();
            for e in c.domain_entries(d) {
                let key = if collapse_groups {
                    e.unit_key()
                } else {
                    e.name.as_str()
                };
                by_key.entry(key).or_default().push(e);
            }
            by_key.into_values().collect()
        })
        .collect();
    let rows = Competency::ALL
        .iter()
        .map(|&comp| {
            let rule = rules.rule(comp);
            TaxonomyRow {
                row: comp.as_str().to_string(),
                section: comp.root().as_str().to_string(),
                cells: domains
                    .iter()
                    .zip(&units)
                    .map(|(&d, units)| {
                        let hits = units
                            .iter()
                            .filter(|members| {
                                members.iter().all(|e| rule_activable(&e.profile, rule))
                            })
                            .count();
                        cell(d, hits, units.len())
                    })
                    .collect(),
            }
        })
        .collect();
    TaxonomyTable {
        kind: TaxonomyKind::Competencies,
        collapse_groups,
        domains,
        rows,
    }
}

const BUNDLED: [(&str, &str); 15] = [
    (
        "fixtures/cat.ctp.json",
        include_str!("../../../fixtures/cat.ctp.json"),
    ),
    (
        "fixtures/classic_maze_angry_bird.ctp.json",
        include_str!("../../../fixtures/classic_maze_angry_bird.ctp.json"),
    ),
    (
        "fixtures/classic_maze_pvz.ctp.json",
        include_str!("../../../fixtures/classic_maze_pvz.ctp.json"),
    ),
    (
        "fixtures/ctt_item14.ctp.json",
        include_str!("../../../fixtures/ctt_item14.ctp.json"),
    ),
    (
        "fixtures/gpp_part1.ctp.json",
        include_str!("../../../fixtures/gpp_part1.ctp.json"),
    ),
    (
        "fixtures/gpp_part2.ctp.json",
        include_str!("../../../fixtures/gpp_part2.ctp.json"),
    ),
    (
        "fixtures/minigolf.ctp.json",
        include_str!("../../../fixtures/minigolf.ctp.json"),
    ),
    (
        "fixtures/ozobot_maze.ctp.json",
        include_str!("../../../fixtures/ozobot_maze.ctp.json"),
    ),
    (
        "fixtures/r2t2.ctp.json",
        include_str!("../../../fixtures/r2t2.ctp.json"),
    ),
    (
        "fixtures/store_the_marbles.ctp.json",
        include_str!("../../../fixtures/store_the_marbles.ctp.json"),
    ),
    (
        "fixtures/thymio_control.ctp.json",
        include_str!("../../../fixtures/thymio_control.ctp.json"),
    ),
    (
        "fixtures/thymio_test.ctp.json",
        include_str!("../../../fixtures/thymio_test.ctp.json"),
    ),
    (
        "fixtures/tps_board.ctp.json",
        include_str!("../../../fixtures/tps_board.ctp.json"),
    ),
    (
        "fixtures/tps_pencil.ctp.json",
        include_str!("../../../fixtures/tps_pencil.ctp.json"),
    ),
    (
        "fixtures/zoombinis.ctp.json",
        include_str!("../../../fixtures/zoombinis.ctp.json"),
    ),
];

const BUNDLED_MANIFEST: &str = include_str!("../../../fixtures/corpus_manifest.json");

/// Source text of the shipped fixtures, as `(path, text)` pairs.
pub fn bundled_sources() -> &'static [(&'static str, &'static str)] {
    &BUNDLED
}

pub fn bundled_manifest_text() -> &'static str {
    BUNDLED_MANIFEST
}

/// The shipped 15-profile fixture corpus, compiled into the binary.
pub fn bundled_corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        Corpus::from_sources(BUNDLED.iter().copied(), Some(BUNDLED_MANIFEST))
            .expect("bundled fixtures are valid")
    })
}
