//! Scenario-file schema: strict JSON with every field optional and bench
//! defaults filled in. Unknown keys are rejected. `filter` distinguishes
//! absent (bench LC filter) from explicit `null` (no filter).

use blackstart::demag::{build_residual_flux, DemagParams};
use blackstart::filter::FilterParams;
use blackstart::frames::{AlphaBeta, ThreePhase};
use blackstart::profiles::MagnetizationProfile;
use blackstart::transformer::CoreParams;
use blackstart::{Scenario, SystemParams};
use serde::{Deserialize, Deserializer, Serialize};

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawScenarioFile {
    system: RawSystem,
    core: RawCore,
    /// Absent: bench filter. `null`: direct connection. Object: custom.
    #[serde(deserialize_with = "double_option")]
    filter: Option<Option<RawFilter>>,
    profile: Option<String>,
    residual_wb: Option<[f64; 2]>,
    prefluxing: Option<RawPrefluxing>,
    demag_first: Option<bool>,
    dt_s: Option<f64>,
    t_end_s: Option<f64>,
    control_zoh: Option<bool>,
}

fn double_option<'de, T, D>(de: D) -> Result<Option<Option<T>>, D::Error>
where
    T: Deserialize<'de>,
    D: Deserializer<'de>,
{
    Deserialize::deserialize(de).map(Some)
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawSystem {
    v_ll_rms: Option<f64>,
    f0: Option<f64>,
    s_rated: Option<f64>,
    v_dc: Option<f64>,
    i_rated_peak: Option<f64>,
    f_sw: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawCore {
    lambda_knee: Option<f64>,
    l_mag: Option<f64>,
    l_sat: Option<f64>,
    r_core: Option<f64>,
    r_wind: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct RawFilter {
    l_f: Option<f64>,
    c_f: Option<f64>,
    r_damp: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPrefluxing {
    pub pattern_v: [f64; 3],
    pub duration_s: f64,
}

/// Fully-resolved scenario, serialized back into metrics.json as the
/// scenario echo. Field order is the schema order.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedScenario {
    pub system: SystemEcho,
    pub core: CoreEcho,
    pub filter: Option<FilterEcho>,
    pub profile: String,
    pub residual_wb: [f64; 2],
    pub prefluxing: Option<RawPrefluxing>,
    pub demag_first: bool,
    pub dt_s: f64,
    pub t_end_s: f64,
    pub control_zoh: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemEcho {
    pub v_ll_rms: f64,
    pub f0: f64,
    pub s_rated: f64,
    pub v_dc: f64,
    pub i_rated_peak: f64,
    pub f_sw: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoreEcho {
    pub lambda_knee: f64,
    pub l_mag: f64,
    pub l_sat: f64,
    pub r_core: f64,
    pub r_wind: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FilterEcho {
    pub l_f: f64,
    pub c_f: f64,
    pub r_damp: f64,
}

/// Schema-level problem: bad JSON, unknown key, or inconsistent values.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "scenario schema error: {}", self.0)
    }
}

pub fn profile_from_tag(tag: &str, p: &SystemParams) -> Result<MagnetizationProfile, SchemaError> {
    match tag {
        "hard" => Ok(MagnetizationProfile::Hard),
        "ultrafast" => Ok(MagnetizationProfile::ultra_fast(p)),
        "spiral" => Ok(MagnetizationProfile::spiral(p)),
        other => Err(SchemaError(format!(
            "profile must be one of \"hard\", \"ultrafast\", \"spiral\"; got \"{other}\""
        ))),
    }
}

/// Parses, validates, and default-fills a scenario file.
pub fn parse_scenario(text: &str, force_no_filter: bool) -> Result<(Scenario, ResolvedScenario), SchemaError> {
    let raw: RawScenarioFile = serde_json::from_str(text)
        .map_err(|e| SchemaError(format!("{e} (line {}, column {})", e.line(), e.column())))?;
    resolve(raw, force_no_filter)
}

fn resolve(
    raw: RawScenarioFile,
    force_no_filter: bool,
) -> Result<(Scenario, ResolvedScenario), SchemaError> {
    let bad = |field: &str, e: blackstart::SimError| SchemaError(format!("{field}: {e}"));

    let sys = SystemEcho {
        v_ll_rms: raw.system.v_ll_rms.unwrap_or(400.0),
        f0: raw.system.f0.unwrap_or(60.0),
        s_rated: raw.system.s_rated.unwrap_or(5_000.0),
        v_dc: raw.system.v_dc.unwrap_or(700.0),
        i_rated_peak: raw.system.i_rated_peak.unwrap_or(10.2),
        f_sw: raw.system.f_sw.unwrap_or(8_000.0),
    };
    let params = SystemParams::from_line_to_line(
        sys.v_ll_rms,
        sys.f0,
        sys.s_rated,
        sys.v_dc,
        sys.i_rated_peak,
        sys.f_sw,
    )
    .map_err(|e| bad("system", e))?;

    let core_default = CoreParams::default_for(&params);
    let core_vals = CoreEcho {
        lambda_knee: raw.core.lambda_knee.unwrap_or(core_default.lambda_knee),
        l_mag: raw.core.l_mag.unwrap_or(core_default.l_mag),
        l_sat: raw.core.l_sat.unwrap_or(core_default.l_sat),
        r_core: raw.core.r_core.unwrap_or(core_default.r_core),
        r_wind: raw.core.r_wind.unwrap_or(core_default.r_wind),
    };
    let core = CoreParams::new(
        core_vals.lambda_knee,
        core_vals.l_mag,
        core_vals.l_sat,
        core_vals.r_core,
        core_vals.r_wind,
    )
    .map_err(|e| bad("core", e))?;

    let filter = if force_no_filter {
        None
    } else {
        match raw.filter {
            None => Some(FilterParams::default_5kva()),
            Some(None) => None,
            Some(Some(f)) => {
                let d = FilterParams::default_5kva();
                Some(
                    FilterParams::new(
                        f.l_f.unwrap_or(d.l_f),
                        f.c_f.unwrap_or(d.c_f),
                        f.r_damp.unwrap_or(d.r_damp),
                    )
                    .map_err(|e| bad("filter", e))?,
                )
            }
        }
    };

    let profile_tag = raw.profile.unwrap_or_else(|| "spiral".to_string());
    let profile = profile_from_tag(&profile_tag, &params)?;

    if raw.residual_wb.is_some() && raw.prefluxing.is_some() {
        return Err(SchemaError(
            "residual_wb and prefluxing are mutually exclusive".into(),
        ));
    }
    let residual_wb = raw.residual_wb.unwrap_or([0.0, 0.0]);
    let prefluxing = match &raw.prefluxing {
        Some(pf) => Some(
            build_residual_flux(
                ThreePhase::new(pf.pattern_v[0], pf.pattern_v[1], pf.pattern_v[2]),
                pf.duration_s,
            )
            .map_err(|e| bad("prefluxing", e))?,
        ),
        None => None,
    };

    let resolved = ResolvedScenario {
        system: sys,
        core: core_vals,
        filter: filter.map(|f| FilterEcho { l_f: f.l_f, c_f: f.c_f, r_damp: f.r_damp }),
        profile: profile_tag,
        residual_wb,
        prefluxing: raw.prefluxing,
        demag_first: raw.demag_first.unwrap_or(false),
        dt_s: raw.dt_s.unwrap_or(1e-6),
        t_end_s: raw.t_end_s.unwrap_or(0.1),
        control_zoh: raw.control_zoh.unwrap_or(false),
    };

    let scenario = Scenario {
        params,
        core,
        filter,
        profile,
        residual: AlphaBeta::new(residual_wb[0], residual_wb[1]),
        prefluxing,
        demag_first: resolved.demag_first,
        demag: DemagParams::default(),
        dt: resolved.dt_s,
        t_end: resolved.t_end_s,
        control_zoh: resolved.control_zoh,
    };
    scenario
        .validate()
        .map_err(|e| SchemaError(e.to_string()))?;
    Ok((scenario, resolved))
}
