//! JSON form of a [`HarmonicMap`]:
//!
//! ```json
//! {"variant": "scaled_combo",
//!  "params": {"base": {"variant": "pommerenke_kn", "params": {"n": 2}},
//!             "k": 0.25, "sign": -1, "normalize": true}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs. `h_coeffs` / `g_coeffs` are only
//! present for `series`. Nested maps (`affine`, `koebe`, `scaled`,
//! `analytic_part`) carry their base as a full descriptor under `params.base`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{AnalyticFamily, HarmonicMap, KoebeNormalization, Sign, DEFAULT_SERIES_RADIUS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDescriptor {
    pub variant: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_coeffs: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_coeffs: Option<Vec<[f64; 2]>>,
}

fn pair(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Descriptor(msg.into())
}

fn get<'a>(params: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    params.get(key).ok_or_else(|| bad(format!("missing parameter `{key}`")))
}

fn get_f64(params: &Map<String, Value>, key: &str) -> Result<f64> {
    get(params, key)?.as_f64().ok_or_else(|| bad(format!("`{key}` must be a number")))
}

fn get_complex(params: &Map<String, Value>, key: &str) -> Result<Complex64> {
    let v: [f64; 2] = serde_json::from_value(get(params, key)?.clone())
        .map_err(|_| bad(format!("`{key}` must be an [re, im] pair")))?;
    Ok(Complex64::new(v[0], v[1]))
}

fn get_bool_or(params: &Map<String, Value>, key: &str, default: bool) -> Result<bool> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v.as_bool().ok_or_else(|| bad(format!("`{key}` must be a boolean"))),
    }
}

fn get_base(params: &Map<String, Value>) -> Result<HarmonicMap> {
    let d: MapDescriptor = serde_json::from_value(get(params, "base")?.clone())
        .map_err(|e| bad(format!("invalid base descriptor: {e}")))?;
    HarmonicMap::try_from(d)
}

fn get_n(params: &Map<String, Value>) -> Result<u32> {
    get(params, "n")?
        .as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| bad("`n` must be a positive integer"))
}

fn coeffs(list: &Option<Vec<[f64; 2]>>) -> Vec<Complex64> {
    list.iter().flatten().map(|c| Complex64::new(c[0], c[1])).collect()
}

impl From<&HarmonicMap> for MapDescriptor {
    fn from(map: &HarmonicMap) -> Self {
        let mut params = Map::new();
        let mut h_coeffs = None;
        let mut g_coeffs = None;
        let variant = match map {
            HarmonicMap::PommerenkeKn { n } => {
                params.insert("n".into(), json!(n));
                "pommerenke_kn"
            }
            HarmonicMap::HAlpha { alpha } => {
                params.insert("alpha".into(), json!(alpha));
                "h_alpha"
            }
            HarmonicMap::HarmonicKoebe => "harmonic_koebe",
            HarmonicMap::Series(s) => {
                params.insert("radius".into(), json!(s.radius()));
                h_coeffs = Some(s.h_coeffs().iter().map(|c| [c.re, c.im]).collect());
                g_coeffs = Some(s.g_coeffs().iter().map(|c| [c.re, c.im]).collect());
                "series"
            }
            HarmonicMap::Affine(a) => {
                params.insert("base".into(), descriptor_value(a.base()));
                params.insert("eps".into(), pair(a.eps()));
                params.insert("normalize".into(), json!(a.normalize()));
                "affine"
            }
            HarmonicMap::ScaledCombo { base, k, sign, normalize } => {
                let base_map = match *base {
                    AnalyticFamily::PommerenkeKn { n } => HarmonicMap::PommerenkeKn { n },
                    AnalyticFamily::HAlpha { alpha } => HarmonicMap::HAlpha { alpha },
                };
                params.insert("base".into(), descriptor_value(&base_map));
                params.insert("k".into(), json!(k));
                params.insert("sign".into(), json!(sign.as_f64() as i32));
                params.insert("normalize".into(), json!(normalize));
                "scaled_combo"
            }
            HarmonicMap::Koebe(t) => {
                params.insert("base".into(), descriptor_value(t.base()));
                params.insert("a".into(), pair(t.a()));
                params.insert("theta".into(), json!(t.theta()));
                let norm = match t.normalization() {
                    KoebeNormalization::AnalyticDerivative => "analytic",
                    KoebeNormalization::DirectionalDerivative => "directional",
                };
                params.insert("normalization".into(), json!(norm));
                "koebe"
            }
            HarmonicMap::Scaled { base, factor } => {
                params.insert("base".into(), descriptor_value(base));
                params.insert("factor".into(), pair(*factor));
                "scaled"
            }
            HarmonicMap::AnalyticPart(base) => {
                params.insert("base".into(), descriptor_value(base));
                "analytic_part"
            }
        };
        MapDescriptor { variant: variant.into(), params, h_coeffs, g_coeffs }
    }
}

fn descriptor_value(map: &HarmonicMap) -> Value {
    serde_json::to_value(MapDescriptor::from(map)).unwrap_or(Value::Null)
}

impl TryFrom<MapDescriptor> for HarmonicMap {
    type Error = Error;

    fn try_from(d: MapDescriptor) -> Result<Self> {
        let p = &d.params;
        match d.variant.as_str() {
            "pommerenke_kn" => HarmonicMap::kn(get_n(p)?),
            "h_alpha" => HarmonicMap::h_alpha(get_f64(p, "alpha")?),
            "harmonic_koebe" => Ok(HarmonicMap::HarmonicKoebe),
            "identity" => Ok(HarmonicMap::identity()),
            "series" => {
                let radius = match p.get("radius") {
                    None => DEFAULT_SERIES_RADIUS,
                    Some(_) => get_f64(p, "radius")?,
                };
                HarmonicMap::series(coeffs(&d.h_coeffs), coeffs(&d.g_coeffs), radius)
            }
            "affine" => {
                let base = get_base(p)?;
                base.affine_transform_with(get_complex(p, "eps")?, get_bool_or(p, "normalize", true)?)
            }
            "affine_koebe" => HarmonicMap::affine_koebe(get_f64(p, "b")?),
            "scaled_combo" => {
                let base = match get_base(p)? {
                    HarmonicMap::PommerenkeKn { n } => AnalyticFamily::PommerenkeKn { n },
                    HarmonicMap::HAlpha { alpha } => AnalyticFamily::HAlpha { alpha },
                    other => {
                        return Err(bad(format!(
                            "scaled_combo base must be pommerenke_kn or h_alpha, got {}",
                            MapDescriptor::from(&other).variant
                        )))
                    }
                };
                let sign = match get(p, "sign")?.as_i64() {
                    Some(1) => Sign::Plus,
                    Some(-1) => Sign::Minus,
                    _ => return Err(bad("`sign` must be 1 or -1")),
                };
                HarmonicMap::scaled_combo(base, get_f64(p, "k")?, sign, get_bool_or(p, "normalize", true)?)
            }
            "koebe" => {
                let base = get_base(p)?;
                let norm = match p.get("normalization").and_then(Value::as_str) {
                    None | Some("directional") => KoebeNormalization::DirectionalDerivative,
                    Some("analytic") => KoebeNormalization::AnalyticDerivative,
                    Some(other) => return Err(bad(format!("unknown normalization `{other}`"))),
                };
                let theta = match p.get("theta") {
                    None => 0.0,
                    Some(_) => get_f64(p, "theta")?,
                };
                base.koebe_transform(get_complex(p, "a")?, theta, norm)
            }
            "scaled" => get_base(p)?.scaled(get_complex(p, "factor")?),
            "analytic_part" => Ok(get_base(p)?.analytic_part()),
            other => Err(bad(format!("unknown variant `{other}`"))),
        }
    }
}

impl HarmonicMap {
    pub fn to_descriptor(&self) -> MapDescriptor {
        MapDescriptor::from(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_descriptor()).unwrap_or_default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: MapDescriptor =
            serde_json::from_str(text).map_err(|e| bad(format!("malformed map JSON: {e}")))?;
        HarmonicMap::try_from(d)
    }
}

impl Serialize for HarmonicMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HarmonicMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = MapDescriptor::deserialize(d)?;
        HarmonicMap::try_from(desc).map_err(serde::de::Error::custom)
    }
}
