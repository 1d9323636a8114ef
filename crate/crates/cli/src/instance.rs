//! Instance file schema, canonical serialization, and content digests.
//!
//! Instances are TOML documents with sections `patch`, `cone`, `objective`,
//! `constraints` (array of tables), `tolerances`, `resolution`, `grid`, and
//! an optional `scalarization` block. All angles are radians; all vectors
//! are triples of decimals. The digest of an instance is the SHA-256 of its
//! canonical serialization — the parsed structure re-serialized with fixed
//! field order — so formatting and comments never affect identity.

use serde::{Deserialize, Serialize};
use sgop_core::cone::SectorCone;
use sgop_core::problem::{
    ConstraintTerm, GopInstance, Objective, Resolution, Tolerances,
};
use sgop_core::separation::SearchGrid;
use sgop_core::sphere::{Patch, SpherePoint, TangentVector};
use sgop_core::Vec3;

/// Parse/validation failure with the offending field named.
#[derive(Debug)]
pub struct InstanceError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for InstanceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for InstanceError {}

fn err(field: &str, message: impl Into<String>) -> InstanceError {
    InstanceError { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: u32,
    pub patch: PatchSection,
    pub cone: ConeSection,
    pub objective: ObjectiveSection,
    pub constraints: Vec<ConstraintSection>,
    #[serde(default)]
    pub tolerances: TolerancesSection,
    pub resolution: ResolutionSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalarization: Option<ScalarizationSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchSection {
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSection {
    /// Reference point `p`; defaults to the patch center.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<[f64; 3]>,
    pub base_tangent_a: [f64; 3],
    pub base_tangent_b: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ObjectiveSection {
    Identity,
    Rotation { axis: [f64; 3], angle: f64 },
    Pull { anchor: [f64; 3], t: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintSection {
    Ball { center: [f64; 3], radius: f64 },
    Affine { normal: [f64; 3], offset: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TolerancesSection {
    pub membership: f64,
    pub feasibility: f64,
    pub antipodal: f64,
    pub certificate: f64,
}

impl Default for TolerancesSection {
    fn default() -> Self {
        let t = Tolerances::default();
        TolerancesSection {
            membership: t.membership,
            feasibility: t.feasibility,
            antipodal: t.antipodal,
            certificate: t.certificate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionSection {
    pub radial: u32,
    pub angular: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    pub n_angle: usize,
    pub lambda_levels: Vec<f64>,
    pub lambda_scales: Vec<f64>,
    pub gamma_levels: Vec<f64>,
}

impl Default for GridSection {
    fn default() -> Self {
        let g = SearchGrid::default();
        GridSection {
            n_angle: g.n_angle,
            lambda_levels: g.lambda_levels,
            lambda_scales: g.lambda_scales,
            gamma_levels: g.gamma_levels,
        }
    }
}

/// Scalarizing vector spec: the token `"auto"` or an explicit 3-vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PSpec {
    Auto(String),
    Explicit([f64; 3]),
}

impl Default for PSpec {
    fn default() -> Self {
        PSpec::Auto("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarizationSection {
    #[serde(default)]
    pub p: PSpec,
    pub y0: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionSection>,
    #[serde(default = "default_scal_tol")]
    pub tol: f64,
}

fn default_scal_tol() -> f64 {
    1e-9
}

/// A parsed, validated instance together with its file-level configuration.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub file: InstanceFile,
    pub instance: GopInstance,
    pub resolution: Resolution,
    pub grid: SearchGrid,
    pub digest: String,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile =
            toml::from_str(text).map_err(|e| err("document", e.to_string()))?;
        if file.schema != 1 {
            return Err(err("schema", format!("unsupported schema {}", file.schema)));
        }
        Ok(file)
    }

    /// Canonical serialization: the structure re-emitted with fixed field
    /// order, independent of the input formatting.
    pub fn canonical_toml(&self) -> String {
        toml::to_string(self).expect("instance structures always serialize")
    }

    /// `sha256:<hex>` over the canonical serialization.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(self.canonical_toml().as_bytes());
        format!("sha256:{}", hex::encode(hasher.finalize()))
    }

    /// Builds the runtime instance, naming the offending field on failure.
    pub fn build(&self) -> Result<LoadedInstance, InstanceError> {
        let center = SpherePoint::from_array(self.patch.center)
            .map_err(|e| err("patch.center", e.to_string()))?;
        let patch = Patch::new(center, self.patch.radius)
            .map_err(|e| err("patch.radius", e.to_string()))?;

        let ref_point = match self.cone.base_point {
            Some(p) => {
                SpherePoint::from_array(p).map_err(|e| err("cone.base_point", e.to_string()))?
            }
            None => center,
        };
        let gen_a = projected_generator(ref_point, self.cone.base_tangent_a)
            .map_err(|m| err("cone.base_tangent_a", m))?;
        let gen_b = projected_generator(ref_point, self.cone.base_tangent_b)
            .map_err(|m| err("cone.base_tangent_b", m))?;
        let cone = SectorCone::new(ref_point, gen_a, gen_b)
            .map_err(|e| err("cone", e.to_string()))?;

        let objective = match &self.objective {
            ObjectiveSection::Identity => Objective::Identity,
            ObjectiveSection::Rotation { axis, angle } => {
                Objective::Rotation { axis: Vec3::from_array(*axis), angle: *angle }
            }
            ObjectiveSection::Pull { anchor, t } => Objective::Pull {
                anchor: SpherePoint::from_array(*anchor)
                    .map_err(|e| err("objective.anchor", e.to_string()))?,
                t: *t,
            },
        };

        let mut constraints = Vec::with_capacity(self.constraints.len());
        for (i, section) in self.constraints.iter().enumerate() {
            let term = match section {
                ConstraintSection::Ball { center, radius } => {
                    if !(*radius > 0.0) {
                        return Err(err(
                            &format!("constraints[{i}].radius"),
                            "ball radius must be positive",
                        ));
                    }
                    ConstraintTerm::Ball {
                        center: SpherePoint::from_array(*center)
                            .map_err(|e| err(&format!("constraints[{i}].center"), e.to_string()))?,
                        radius: *radius,
                    }
                }
                ConstraintSection::Affine { normal, offset } => ConstraintTerm::Affine {
                    normal: Vec3::from_array(*normal),
                    offset: *offset,
                },
            };
            constraints.push(term);
        }

        let t = &self.tolerances;
        for (name, value) in [
            ("tolerances.membership", t.membership),
            ("tolerances.feasibility", t.feasibility),
            ("tolerances.antipodal", t.antipodal),
            ("tolerances.certificate", t.certificate),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(err(name, format!("tolerance must lie in (0,1); got {value}")));
            }
        }
        let tolerances = Tolerances {
            membership: t.membership,
            feasibility: t.feasibility,
            antipodal: t.antipodal,
            certificate: t.certificate,
        };

        let instance = GopInstance::new(patch, ref_point, cone, objective, constraints, tolerances)
            .map_err(|e| err("instance", e.to_string()))?;

        if self.resolution.radial < 1 {
            return Err(err("resolution.radial", "must be ≥ 1"));
        }
        if self.resolution.angular < 3 {
            return Err(err("resolution.angular", "must be ≥ 3"));
        }
        let resolution = Resolution::new(self.resolution.radial, self.resolution.angular);

        // The feasible set must be visible on the declared grid.
        match instance.has_feasible_sample(resolution) {
            Ok(true) => {}
            Ok(false) => {
                return Err(err(
                    "constraints",
                    "no grid sample is feasible at the declared resolution",
                ))
            }
            Err(e) => return Err(err("constraints", e.to_string())),
        }

        if self.grid.n_angle == 0 {
            return Err(err("grid.n_angle", "must be ≥ 1"));
        }
        if let Some(bad) = self.grid.gamma_levels.iter().find(|g| !(**g < 0.0)) {
            return Err(err("grid.gamma_levels", format!("levels must be negative; got {bad}")));
        }
        let grid = SearchGrid {
            n_angle: self.grid.n_angle,
            lambda_levels: self.grid.lambda_levels.clone(),
            lambda_scales: self.grid.lambda_scales.clone(),
            gamma_levels: self.grid.gamma_levels.clone(),
        };

        if let Some(s) = &self.scalarization {
            SpherePoint::from_array(s.y0).map_err(|e| err("scalarization.y0", e.to_string()))?;
            if let PSpec::Auto(token) = &s.p {
                if token != "auto" {
                    return Err(err("scalarization.p", format!("unknown token {token:?}")));
                }
            }
            if !(s.tol > 0.0) {
                return Err(err("scalarization.tol", "must be positive"));
            }
        }

        let digest = self.digest();
        Ok(LoadedInstance { file: self.clone(), instance, resolution, grid, digest })
    }
}

/// Scalarization settings resolved against the instance.
pub struct ScalarizationSettings {
    pub p_ref: Option<TangentVector>,
    pub y0: SpherePoint,
    pub resolution: Resolution,
    pub tol: f64,
}

impl LoadedInstance {
    pub fn scalarization_settings(&self) -> Result<Option<ScalarizationSettings>, InstanceError> {
        let Some(s) = &self.file.scalarization else { return Ok(None) };
        let y0 =
            SpherePoint::from_array(s.y0).map_err(|e| err("scalarization.y0", e.to_string()))?;
        let p_ref = match &s.p {
            PSpec::Auto(_) => None,
            PSpec::Explicit(v) => {
                let raw = Vec3::from_array(*v);
                let projected = TangentVector::projected(self.instance.ref_point(), raw);
                if projected.norm() < 1e-6 {
                    return Err(err(
                        "scalarization.p",
                        "vector is (nearly) normal to the sphere at the reference point",
                    ));
                }
                Some(projected)
            }
        };
        let resolution = s
            .resolution
            .map(|r| Resolution::new(r.radial, r.angular))
            .unwrap_or(self.resolution);
        Ok(Some(ScalarizationSettings { p_ref, y0, resolution, tol: s.tol }))
    }
}

fn projected_generator(base: SpherePoint, raw: [f64; 3]) -> Result<TangentVector, String> {
    let v = TangentVector::projected(base, Vec3::from_array(raw));
    if v.norm() < 1e-6 {
        return Err("vector is (nearly) normal to the sphere at the base point".into());
    }
    Ok(v)
}

pub fn load_from_path(path: &std::path::Path) -> Result<LoadedInstance, InstanceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err("file", format!("{}: {e}", path.display())))?;
    InstanceFile::parse(&text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
schema = 1

[patch]
center = [0.0, 0.0, 1.0]
radius = 0.5

[cone]
base_tangent_a = [1.0, 0.0, 0.0]
base_tangent_b = [0.0, 1.0, 0.0]

[objective]
family = "identity"

[[constraints]]
kind = "ball"
center = [0.0, 0.0, 1.0]
radius = 0.4

[resolution]
radial = 6
angular = 12
"#;

    #[test]
    fn parses_and_builds_minimal_instance() {
        let file = InstanceFile::parse(EXAMPLE).unwrap();
        let loaded = file.build().unwrap();
        assert_eq!(loaded.instance.constraint_len(), 1);
        assert_eq!(loaded.resolution, Resolution::new(6, 12));
        // Defaults flow in.
        assert_eq!(loaded.grid.n_angle, 64);
        assert_eq!(loaded.instance.tolerances().membership, 1e-9);
        assert!(loaded.digest.starts_with("sha256:"));
    }

    #[test]
    fn digest_ignores_formatting_and_comments() {
        let noisy = format!("# a comment\n{}\n# trailing", EXAMPLE.replace("0.5", "0.50"));
        let a = InstanceFile::parse(EXAMPLE).unwrap().digest();
        let b = InstanceFile::parse(&noisy).unwrap().digest();
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_round_trip_preserves_digest() {
        let file = InstanceFile::parse(EXAMPLE).unwrap();
        let canonical = file.canonical_toml();
        let reparsed = InstanceFile::parse(&canonical).unwrap();
        assert_eq!(file.digest(), reparsed.digest());
        assert_eq!(file, reparsed);
    }

    #[test]
    fn named_field_errors() {
        let bad_radius = EXAMPLE.replace("radius = 0.5", "radius = 2.5");
        let e = InstanceFile::parse(&bad_radius).unwrap().build().unwrap_err();
        assert_eq!(e.field, "patch.radius");

        let bad_schema = EXAMPLE.replace("schema = 1", "schema = 9");
        let e = InstanceFile::parse(&bad_schema).unwrap_err();
        assert_eq!(e.field, "schema");

        let bad_gen = EXAMPLE.replace("base_tangent_a = [1.0, 0.0, 0.0]",
                                      "base_tangent_a = [0.0, 0.0, 1.0]");
        let e = InstanceFile::parse(&bad_gen).unwrap().build().unwrap_err();
        assert_eq!(e.field, "cone.base_tangent_a");

        // Infeasible-everywhere constraints are caught at load.
        let infeasible = EXAMPLE.replace(
            "kind = \"ball\"\ncenter = [0.0, 0.0, 1.0]\nradius = 0.4",
            "kind = \"affine\"\nnormal = [0.0, 0.0, -1.0]\noffset = 0.5",
        );
        let e = InstanceFile::parse(&infeasible).unwrap().build().unwrap_err();
        assert_eq!(e.field, "constraints");
    }

    #[test]
    fn scalarization_section_resolution_fallback() {
        let with_scal = format!(
            "{EXAMPLE}\n[scalarization]\ny0 = [0.0, 0.0, 1.0]\n"
        );
        let loaded = InstanceFile::parse(&with_scal).unwrap().build().unwrap();
        let settings = loaded.scalarization_settings().unwrap().unwrap();
        assert_eq!(settings.resolution, loaded.resolution);
        assert!(settings.p_ref.is_none());
        assert_eq!(settings.tol, 1e-9);
    }
}
