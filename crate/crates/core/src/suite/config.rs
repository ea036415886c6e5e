use serde::Deserialize;

use crate::{Error, Result};

/// The checked-in defaults file.
pub const DEFAULTS_TOML: &str = include_str!("../../defaults.toml");

const VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub version: u32,
    pub digits: u32,
    pub transforms: TransformsConfig,
    pub product: ProductConfig,
    pub decay: DecayConfig,
    pub lvalues: LValuesConfig,
    pub agreement: AgreementConfig,
    pub qmf32: QmfConfig,
    pub qmf12: QmfConfig,
    pub cross: CrossConfig,
    pub strange: StrangeConfig,
    pub knots: KnotsConfig,
    pub cusps: CuspsConfig,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformsConfig {
    pub builders: Vec<String>,
    pub gammas: usize,
    pub negative_d: usize,
    pub entry_bound: i64,
    pub points: usize,
    pub y_range: [f64; 2],
    pub seed: u64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductConfig {
    pub builders: Vec<String>,
    pub points: usize,
    pub y_range: [f64; 2],
    pub seed: u64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayConfig {
    pub builder: String,
    pub heights: Vec<f64>,
    pub tolerance: f64,
    pub dual_cusps: Vec<String>,
    pub dual_height: f64,
    pub dual_tolerance: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LValuesConfig {
    pub builders: Vec<String>,
    pub cusps: Vec<String>,
    pub max_n: u32,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgreementConfig {
    pub builders: Vec<String>,
    pub cusps: Vec<String>,
    pub order: usize,
    pub tolerance: f64,
    pub fit_t0: f64,
    pub fit_samples: usize,
    pub fit_ratio: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmfConfig {
    pub tolerance: f64,
    pub quad_target: f64,
    pub cases: Vec<QmfCase>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QmfCase {
    pub builder: String,
    pub gammas: Vec<String>,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossConfig {
    pub eichler_builder: String,
    pub eichler_points: Vec<String>,
    pub eichler_tolerance: f64,
    pub cusp_builders: Vec<String>,
    pub cusp_points: Vec<Vec<String>>,
    pub cusp_tolerance: f64,
    pub quad_target: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrangeConfig {
    pub tolerance: f64,
    pub unimodal_tolerance: f64,
    pub unimodal_exponents: usize,
    pub cases: Vec<StrangeCase>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrangeCase {
    pub side: String,
    pub alphas: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotsConfig {
    pub f_max_order: u64,
    pub ft_max_order: u64,
    pub ft_values: Vec<u32>,
    pub x_max_order: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspsConfig {
    pub moduli: Vec<u32>,
    pub max_denominator: i64,
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if c.version != VERSION {
            return Err(Error::Config(format!("defaults version {} is not {VERSION}", c.version)));
        }
        Ok(c)
    }

    pub fn defaults() -> Self {
        Self::from_toml(DEFAULTS_TOML).expect("checked-in defaults parse")
    }
}
