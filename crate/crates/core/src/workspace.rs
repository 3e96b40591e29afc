//! JSON documents and a named registry of loaded objects.
//!
//! Every object is a single self-describing JSON document; its kind is
//! recognised from its keys. A workspace document `{"members": [...]}`
//! lists further files, resolved relative to its own directory. Objects
//! reference their groupoids by name, and parents must already be loaded
//! or be one of the built-in fixtures.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{AlgebraElement, AlgebraElementDoc};
use crate::bibundle::{BibundleDoc, PrincipalBibundle};
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::groupoid::{build_standard, FiniteGroupoid, Functor, FunctorSpec, GroupoidSpec, StandardSpec};
use crate::module::{CModule, CModuleDoc};
use crate::rep::{Representation, RepresentationDoc};
use crate::report::Report;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorkspaceDoc {
    pub members: Vec<String>,
}

/// A parsed document, before parents are resolved.
#[derive(Clone, Debug)]
pub enum Document {
    Groupoid(GroupoidSpec),
    Standard { name: Option<String>, spec: StandardSpec },
    Representation(RepresentationDoc),
    Module(CModuleDoc),
    Bibundle(BibundleDoc),
    Functor(FunctorSpec),
    Element(AlgebraElementDoc),
    Workspace(WorkspaceDoc),
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let value: Value = serde_json::from_str(text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Json("a document must be a JSON object".into()))?;
        let has = |k: &str| obj.contains_key(k);
        let doc = if has("members") {
            Document::Workspace(serde_json::from_value(value)?)
        } else if has("kind") {
            let name = obj.get("name").and_then(Value::as_str).map(str::to_string);
            let mut v = value.clone();
            v.as_object_mut().expect("object").remove("name");
            Document::Standard {
                name,
                spec: serde_json::from_value(v)?,
            }
        } else if has("compose") {
            Document::Groupoid(serde_json::from_value(value)?)
        } else if has("rho") {
            Document::Representation(serde_json::from_value(value)?)
        } else if has("act") {
            Document::Module(serde_json::from_value(value)?)
        } else if has("points") {
            Document::Bibundle(serde_json::from_value(value)?)
        } else if has("on_objects") {
            Document::Functor(serde_json::from_value(value)?)
        } else if has("coeffs") {
            Document::Element(serde_json::from_value(value)?)
        } else {
            return Err(Error::Json("unrecognised document: no known keys".into()));
        };
        Ok(doc)
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            Document::Groupoid(d) => d.name.as_deref(),
            Document::Standard { name, .. } => name.as_deref(),
            Document::Representation(d) => d.name.as_deref(),
            Document::Module(d) => d.name.as_deref(),
            Document::Bibundle(d) => d.name.as_deref(),
            Document::Functor(d) => d.name.as_deref(),
            Document::Element(d) => d.name.as_deref(),
            Document::Workspace(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Entry {
    Groupoid(Arc<FiniteGroupoid>),
    Representation(Representation),
    Module(CModule),
    Bibundle(PrincipalBibundle),
    Functor {
        functor: Functor,
        src: Arc<FiniteGroupoid>,
        tgt: Arc<FiniteGroupoid>,
    },
    Element(AlgebraElement),
}

impl Entry {
    pub fn kind(&self) -> &'static str {
        match self {
            Entry::Groupoid(_) => "groupoid",
            Entry::Representation(_) => "representation",
            Entry::Module(_) => "module",
            Entry::Bibundle(_) => "bibundle",
            Entry::Functor { .. } => "functor",
            Entry::Element(_) => "element",
        }
    }

    /// The canonical document, named `name`.
    pub fn to_json(&self, name: &str) -> String {
        let name = Some(name.to_string());
        let value = match self {
            Entry::Groupoid(g) => serde_json::to_value(GroupoidSpec {
                name,
                ..g.to_spec()
            }),
            Entry::Representation(e) => serde_json::to_value(RepresentationDoc { name, ..e.to_doc() }),
            Entry::Module(m) => serde_json::to_value(CModuleDoc { name, ..m.to_doc() }),
            Entry::Bibundle(p) => serde_json::to_value(BibundleDoc { name, ..p.to_doc() }),
            Entry::Functor { functor, src, tgt } => serde_json::to_value(FunctorSpec {
                name,
                ..functor.to_spec(src, tgt)
            }),
            Entry::Element(a) => serde_json::to_value(AlgebraElementDoc { name, ..a.to_doc() }),
        };
        let mut s = serde_json::to_string_pretty(&value.expect("documents serialize")).expect("value serializes");
        s.push('\n');
        s
    }
}

/// Loaded objects by unique name, in load order. Groupoids and bibundles
/// of [`Fixtures`] are available by name unless shadowed.
#[derive(Clone, Debug)]
pub struct Workspace {
    entries: Vec<(String, Entry)>,
    index: HashMap<String, usize>,
    fixtures: Fixtures,
}

impl Default for Workspace {
    fn default() -> Self {
        Self::new()
    }
}

impl Workspace {
    pub fn new() -> Self {
        Workspace {
            entries: Vec::new(),
            index: HashMap::new(),
            fixtures: Fixtures::new(),
        }
    }

    pub fn fixtures(&self) -> &Fixtures {
        &self.fixtures
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Entry)> {
        self.entries.iter().map(|(n, e)| (n.as_str(), e))
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.index.get(name).map(|&k| &self.entries[k].1)
    }

    pub fn insert(&mut self, name: impl Into<String>, entry: Entry) -> Result<()> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::Duplicate(name));
        }
        self.index.insert(name.clone(), self.entries.len());
        self.entries.push((name, entry));
        Ok(())
    }

    pub fn groupoid(&self, name: &str) -> Result<Arc<FiniteGroupoid>> {
        match self.get(name) {
            Some(Entry::Groupoid(g)) => Ok(g.clone()),
            Some(other) => Err(Error::Json(format!("{name:?} is a {}, not a groupoid", other.kind()))),
            None => self
                .fixtures
                .groupoids()
                .find(|g| g.name() == name)
                .cloned()
                .ok_or_else(|| Error::UnknownName(name.to_string())),
        }
    }

    pub fn representation(&self, name: &str) -> Result<Representation> {
        match self.get(name) {
            Some(Entry::Representation(e)) => Ok(e.clone()),
            Some(other) => Err(Error::Json(format!("{name:?} is a {}, not a representation", other.kind()))),
            None => Err(Error::UnknownName(name.to_string())),
        }
    }

    /// A loaded representation, or a member of the witness family of `g`
    /// (`trivial` abbreviates `trivial1`).
    pub fn representation_on(&self, g: &Arc<FiniteGroupoid>, name: &str) -> Result<Representation> {
        if let Some(Entry::Representation(e)) = self.get(name) {
            return Ok(e.clone());
        }
        let wanted = if name == "trivial" { "trivial1" } else { name };
        self.fixtures
            .witness_family(g)?
            .into_iter()
            .find(|(n, _)| n == wanted)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn module(&self, name: &str) -> Result<CModule> {
        match self.get(name) {
            Some(Entry::Module(m)) => Ok(m.clone()),
            Some(other) => Err(Error::Json(format!("{name:?} is a {}, not a module", other.kind()))),
            None => Err(Error::UnknownName(name.to_string())),
        }
    }

    pub fn bibundle(&self, name: &str) -> Result<PrincipalBibundle> {
        match self.get(name) {
            Some(Entry::Bibundle(p)) => Ok(p.clone()),
            Some(other) => Err(Error::Json(format!("{name:?} is a {}, not a bibundle", other.kind()))),
            None => {
                let mut all = self.fixtures.bibundles()?;
                all.extend(self.fixtures.chain()?);
                all.into_iter()
                    .find(|p| p.name() == name)
                    .ok_or_else(|| Error::UnknownName(name.to_string()))
            }
        }
    }

    pub fn element(&self, name: &str) -> Result<AlgebraElement> {
        match self.get(name) {
            Some(Entry::Element(a)) => Ok(a.clone()),
            Some(other) => Err(Error::Json(format!("{name:?} is a {}, not an algebra element", other.kind()))),
            None => Err(Error::UnknownName(name.to_string())),
        }
    }

    /// Resolves a parsed document against the workspace. Workspace
    /// documents are not objects and are rejected here.
    pub fn resolve(&self, doc: &Document) -> Result<Entry> {
        Ok(match doc {
            Document::Groupoid(spec) => Entry::Groupoid(Arc::new(FiniteGroupoid::from_spec(spec)?)),
            Document::Standard { name, spec } => {
                let g = build_standard(spec)?;
                Entry::Groupoid(Arc::new(g.with_name(name.clone().unwrap_or_default())))
            }
            Document::Representation(d) => Entry::Representation(Representation::from_doc(self.groupoid(&d.groupoid)?, d)?),
            Document::Module(d) => Entry::Module(CModule::from_doc(self.groupoid(&d.groupoid)?, d)?),
            Document::Bibundle(d) => {
                Entry::Bibundle(PrincipalBibundle::from_doc(self.groupoid(&d.left)?, self.groupoid(&d.right)?, d)?)
            }
            Document::Functor(d) => {
                let (src, tgt) = (self.groupoid(&d.src)?, self.groupoid(&d.tgt)?);
                Entry::Functor {
                    functor: Functor::from_maps_unchecked(&src, &tgt, &d.on_objects, &d.on_arrows)?,
                    src,
                    tgt,
                }
            }
            Document::Element(d) => Entry::Element(AlgebraElement::from_doc(self.groupoid(&d.groupoid)?, d)?),
            Document::Workspace(_) => return Err(Error::Json("nested workspace is not an object".into())),
        })
    }

    /// Loads one file; a workspace document loads its members in order.
    /// Returns the names that were added.
    pub fn load_path(&mut self, path: &Path) -> Result<Vec<String>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let doc = Document::parse(&text).map_err(|e| match e {
            Error::Json(m) => Error::Json(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if let Document::Workspace(ws) = &doc {
            let dir = path.parent().unwrap_or(Path::new("."));
            let mut added = Vec::new();
            for m in &ws.members {
                added.extend(self.load_path(&dir.join(m))?);
            }
            return Ok(added);
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("unnamed");
        let name = doc.name().unwrap_or(stem).to_string();
        self.load_document(&name, &doc)?;
        Ok(vec![name])
    }

    pub fn load_document(&mut self, name: &str, doc: &Document) -> Result<()> {
        let mut entry = self.resolve(doc)?;
        if let Entry::Groupoid(g) = &entry {
            if g.name() != name {
                entry = Entry::Groupoid(Arc::new((**g).clone().with_name(name)));
            }
        }
        self.insert(name, entry)
    }

    /// One check per loaded object, in load order.
    pub fn validate_all(&self) -> Report {
        let mut report = Report::new();
        for (name, entry) in &self.entries {
            let check = format!("{} {name}", entry.kind());
            let violations = match entry {
                Entry::Groupoid(g) => g.validate().violations,
                Entry::Representation(e) => e.validate().violations,
                Entry::Module(m) => m.validate().violations,
                Entry::Bibundle(p) => p.validate().violations,
                Entry::Functor { functor, src, tgt } => match functor.check(src, tgt) {
                    Ok(()) => vec![],
                    Err(e) => {
                        report.fail(check, e.to_string());
                        continue;
                    }
                },
                Entry::Element(_) => vec![],
            };
            let witness = (!violations.is_empty()).then(|| {
                violations
                    .iter()
                    .map(|v| format!("{}: {}", v.name, v.witness))
                    .collect::<Vec<_>>()
                    .join("; ")
            });
            report.record(check, violations.is_empty(), witness);
        }
        report
    }
}
