use std::path::{Path, PathBuf};
use std::str::FromStr;

use smallcovers::polytope::{automorphisms, deserialize, find_isomorphism, serialize};
use smallcovers::symmetry::{generating_set, transport};
use smallcovers::{
    build_regular, enumerate, is_characteristic, restrict_labeling, Alphabet, CombPolytope,
    EnumerateError, Labeling, Permutation, PolytopeError, PolytopeKind, SearchOptions,
    SymmetryError, SymmetryGroup,
};

use crate::artifacts::{self, ClassRow, ClassesFile, Format, Layout};
use crate::error::CliError;

const GROUP_BOUND: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeSource {
    Kind(PolytopeKind),
    File(PathBuf),
}

impl FromStr for PolytopeSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix("file:") {
            Some(path) if !path.is_empty() => Ok(PolytopeSource::File(PathBuf::from(path))),
            Some(_) => Err("file: needs a path".into()),
            None => s.parse().map(PolytopeSource::Kind),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: PolytopeSource,
    pub alphabet: Option<Vec<u32>>,
    pub out: PathBuf,
    pub split_depth: usize,
    pub force_infeasible: bool,
    pub format: Format,
}

/// A polytope together with position-space generators of its symmetry group.
pub struct Loaded {
    pub kind: Option<PolytopeKind>,
    pub polytope: CombPolytope,
    pub generators: Vec<Permutation>,
    pub json: String,
    pub hash: String,
    pub stem: String,
}

fn polytope_error(stage: &'static str, e: PolytopeError) -> CliError {
    match e {
        PolytopeError::ValidationFailure(problems) => {
            CliError::validation(stage, problems.join("; "))
        }
        PolytopeError::Geometry(g) => CliError::validation(stage, g),
        other => CliError::malformed(stage, other),
    }
}

fn enumerate_error(stage: &'static str, e: EnumerateError) -> CliError {
    match e {
        EnumerateError::Infeasible(_) => CliError::Infeasible {
            stage,
            message: format!("{e}; pass --force-infeasible to run it anyway"),
        },
        EnumerateError::InvalidAlphabet(_)
        | EnumerateError::Gf2(_)
        | EnumerateError::WrongArity { .. } => CliError::malformed(stage, e),
        other => CliError::validation(stage, other),
    }
}

fn symmetry_error(stage: &'static str, e: SymmetryError) -> CliError {
    match e {
        SymmetryError::FacetOutOfRange { .. } | SymmetryError::DegreeMismatch { .. } => {
            CliError::malformed(stage, e)
        }
        SymmetryError::Polytope(p) => polytope_error(stage, p),
        SymmetryError::Enumerate(en) => enumerate_error(stage, en),
        other => CliError::validation(stage, other),
    }
}

fn sanitize(name: &str) -> String {
    let stem: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if stem.is_empty() {
        "polytope".into()
    } else {
        stem
    }
}

pub fn load_polytope(source: &PolytopeSource) -> Result<Loaded, CliError> {
    let stage = "build";
    let (kind, polytope, generators) = match source {
        PolytopeSource::Kind(kind) => {
            let regular = build_regular(*kind).map_err(|e| polytope_error(stage, e))?;
            let gens = regular.position_generators();
            (Some(*kind), regular.polytope, gens)
        }
        PolytopeSource::File(path) => {
            let text = artifacts::read(path)?;
            let polytope = deserialize(&text).map_err(|e| polytope_error(stage, e))?;
            let group: Vec<Permutation> = automorphisms(&polytope, GROUP_BOUND)
                .iter()
                .map(|sigma| polytope.to_positions(sigma))
                .collect();
            let gens = generating_set(&group);
            (None, polytope, gens)
        }
    };
    let json = serialize(&polytope).map_err(|e| polytope_error(stage, e))?;
    let hash = artifacts::sha256_hex(json.as_bytes());
    let stem = sanitize(kind.map(PolytopeKind::name).unwrap_or(polytope.name()));
    Ok(Loaded {
        kind,
        polytope,
        generators,
        json,
        hash,
        stem,
    })
}

pub fn default_alphabet(loaded: &Loaded) -> Vec<u32> {
    match loaded.kind {
        Some(PolytopeKind::Cell120) => vec![1, 2, 4, 8, 15],
        _ => (1..1u32 << loaded.polytope.dim()).collect(),
    }
}

pub struct Outcome {
    pub classes: ClassesFile,
    pub layout: Layout,
}

fn cached_labelings(
    path: &Path,
    header: &str,
    polytope: &CombPolytope,
) -> Result<Option<(String, Vec<Labeling>)>, CliError> {
    if !path.exists() {
        return Ok(None);
    }
    let text = artifacts::read(path)?;
    if text.lines().next() != Some(header) {
        return Ok(None);
    }
    let (_, labelings) = artifacts::load_labelings(&text, polytope)?;
    Ok(Some((text, labelings)))
}

pub fn run_pipeline(config: &RunConfig) -> Result<Outcome, CliError> {
    let loaded = load_polytope(&config.source)?;
    let p = &loaded.polytope;
    let layout = Layout::new(&config.out, &loaded.stem);
    artifacts::write(&layout.polytope(), &loaded.json)?;

    let mut values = config
        .alphabet
        .clone()
        .unwrap_or_else(|| default_alphabet(&loaded));
    values.sort_unstable();
    let alphabet =
        Alphabet::new(&values, p.dim()).map_err(|e| CliError::malformed("alphabet", e))?;

    let header = artifacts::labelings_header(&loaded.hash, &alphabet);
    let labelings_path = layout.labelings();
    let (labelings_text, labelings) = match cached_labelings(&labelings_path, &header, p)? {
        Some(found) => {
            eprintln!("enumerate: reusing {}", labelings_path.display());
            found
        }
        None => {
            let options = SearchOptions {
                split_depth: config.split_depth,
                force_infeasible: config.force_infeasible,
            };
            let found =
                enumerate(p, &alphabet, options).map_err(|e| enumerate_error("enumerate", e))?;
            if found.missing_basis {
                eprintln!(
                    "enumerate: alphabet lacks the standard basis, no normalized labelings exist"
                );
            }
            let text = artifacts::render_labelings(&header, &found.labelings);
            artifacts::write(&labelings_path, &text)?;
            let (_, reloaded) = artifacts::load_labelings(&artifacts::read(&labelings_path)?, p)?;
            if reloaded != found.labelings {
                return Err(CliError::validation(
                    "enumerate",
                    "labelings changed on reload",
                ));
            }
            (text, reloaded)
        }
    };
    let labelings_hash = artifacts::sha256_hex(labelings_text.as_bytes());

    let classes_path = layout.classes();
    let cached = if classes_path.exists() {
        ClassesFile::from_json(&artifacts::read(&classes_path)?)
            .ok()
            .filter(|c| c.labelings_sha256 == labelings_hash && c.polytope_sha256 == loaded.hash)
    } else {
        None
    };
    let classes = match cached {
        Some(c) => {
            eprintln!("classify: reusing {}", classes_path.display());
            c
        }
        None => {
            let group = SymmetryGroup::new(p, loaded.generators.clone(), GROUP_BOUND)
                .map_err(|e| symmetry_error("classify", e))?;
            let found = group
                .classify(&labelings)
                .map_err(|e| symmetry_error("classify", e))?;
            let classes = ClassesFile {
                polytope: p.name().to_string(),
                polytope_sha256: loaded.hash.clone(),
                labelings_sha256: labelings_hash,
                dimension: p.dim(),
                alphabet: alphabet.labels().iter().map(|l| l.value()).collect(),
                group_order: group.order(),
                labelings: labelings.len(),
                classes: found.iter().map(ClassRow::from_class).collect(),
            };
            artifacts::write(&classes_path, &classes.to_json())?;
            classes
        }
    };

    artifacts::write(
        &layout.report(config.format),
        &artifacts::render_report(&classes, config.format),
    )?;
    artifacts::write(&layout.summary(), &artifacts::render_summary(&classes))?;
    Ok(Outcome { classes, layout })
}

pub fn report(out: &Path, source: &PolytopeSource, format: Format) -> Result<String, CliError> {
    let stem = match source {
        PolytopeSource::Kind(kind) => kind.name().to_string(),
        PolytopeSource::File(_) => load_polytope(source)?.stem,
    };
    let path = Layout::new(out, &stem).classes();
    if !path.exists() {
        return Err(CliError::Missing {
            stage: "report",
            path,
        });
    }
    let classes = ClassesFile::from_json(&artifacts::read(&path)?)?;
    Ok(artifacts::render_report(&classes, format))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacetSelection {
    One(usize),
    All,
}

impl FromStr for FacetSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(FacetSelection::All);
        }
        match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!(
                "expected a facet number from 1 or \"all\", got {s:?}"
            )),
            Ok(k) => Ok(FacetSelection::One(k)),
        }
    }
}

pub struct RestrictRequest {
    pub labelings: PathBuf,
    pub source: PolytopeSource,
    pub record: usize,
    pub facet: FacetSelection,
    pub classes_dir: Option<PathBuf>,
}

/// One induced labeling, on the dodecahedron's numbering when the facet is a
/// dodecahedron, else on the facet's own numbering.
pub struct Restriction {
    pub facet: usize,
    pub labeling: Labeling,
    pub on_dodecahedron: bool,
    pub class: Option<usize>,
}

struct DodecahedronClasses {
    polytope: CombPolytope,
    group: SymmetryGroup,
    classes: Option<ClassesFile>,
}

fn dodecahedron_classes(dir: &Path) -> Result<DodecahedronClasses, CliError> {
    let stage = "restrict";
    let loaded = load_polytope(&PolytopeSource::Kind(PolytopeKind::Dodecahedron))?;
    let group = SymmetryGroup::new(&loaded.polytope, loaded.generators.clone(), GROUP_BOUND)
        .map_err(|e| symmetry_error(stage, e))?;
    let path = Layout::new(dir, &loaded.stem).classes();
    let classes = if path.exists() {
        let classes = ClassesFile::from_json(&artifacts::read(&path)?)?;
        if classes.polytope_sha256 != loaded.hash {
            return Err(CliError::malformed(
                stage,
                format!(
                    "{} was computed for a different dodecahedron",
                    path.display()
                ),
            ));
        }
        Some(classes)
    } else {
        eprintln!(
            "restrict: no dodecahedron classification at {}, skipping class lookup",
            path.display()
        );
        None
    };
    Ok(DodecahedronClasses {
        polytope: loaded.polytope,
        group,
        classes,
    })
}

pub fn restrict(req: &RestrictRequest) -> Result<Vec<Restriction>, CliError> {
    let stage = "restrict";
    let loaded = load_polytope(&req.source)?;
    let p = &loaded.polytope;
    let (header, labelings) = artifacts::load_labelings(&artifacts::read(&req.labelings)?, p)?;
    if header.polytope_hash != loaded.hash {
        return Err(CliError::malformed(
            stage,
            format!(
                "{} was produced for a different polytope",
                req.labelings.display()
            ),
        ));
    }
    let lab = req
        .record
        .checked_sub(1)
        .and_then(|i| labelings.get(i))
        .ok_or_else(|| {
            CliError::malformed(
                stage,
                format!(
                    "record {} requested, file holds {}",
                    req.record,
                    labelings.len()
                ),
            )
        })?;
    let d = p.facet_count();
    let facets: Vec<usize> = match req.facet {
        FacetSelection::All => (1..=d).collect(),
        FacetSelection::One(k) if k <= d => vec![k],
        FacetSelection::One(k) => {
            return Err(CliError::malformed(
                stage,
                format!("facet {k} out of range 1..={d}"),
            ));
        }
    };
    let classes_dir = req
        .classes_dir
        .clone()
        .or_else(|| req.labelings.parent().map(Path::to_path_buf))
        .unwrap_or_default();
    let mut target: Option<DodecahedronClasses> = None;
    let mut out = Vec::with_capacity(facets.len());
    for facet in facets {
        let (face, restricted) =
            restrict_labeling(lab, facet - 1, p).map_err(|e| symmetry_error(stage, e))?;
        let valid =
            is_characteristic(restricted.labels(), &face).map_err(|e| enumerate_error(stage, e))?;
        if !valid {
            return Err(CliError::validation(
                stage,
                format!("restriction to facet {facet} is not characteristic"),
            ));
        }
        if face.dim() != 3 {
            out.push(Restriction {
                facet,
                labeling: restricted,
                on_dodecahedron: false,
                class: None,
            });
            continue;
        }
        if target.is_none() {
            target = Some(dodecahedron_classes(&classes_dir)?);
        }
        let t = target.as_ref().expect("loaded above");
        let Some(iso) = find_isomorphism(&face, &t.polytope) else {
            out.push(Restriction {
                facet,
                labeling: restricted,
                on_dodecahedron: false,
                class: None,
            });
            continue;
        };
        let moved = transport(&restricted, &face, &t.polytope, &iso)
            .map_err(|e| symmetry_error(stage, e))?;
        let class = match &t.classes {
            Some(classes) => {
                let rep = t.group.canonical(&moved).values();
                let k = classes
                    .classes
                    .iter()
                    .position(|row| row.representative == rep)
                    .ok_or_else(|| {
                        CliError::validation(
                            stage,
                            format!("restriction to facet {facet} matches no recorded class"),
                        )
                    })?;
                Some(k + 1)
            }
            None => None,
        };
        out.push(Restriction {
            facet,
            labeling: moved,
            on_dodecahedron: true,
            class,
        });
    }
    Ok(out)
}
