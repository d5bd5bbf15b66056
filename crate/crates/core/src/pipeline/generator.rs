//! Synthetic monthly customer extracts with planted churn drivers.
//!
//! Each customer carries latent engagement (an AR(1) process around a personal
//! baseline, with a subset entering a sustained decline), optional arrears
//! growth and an optional promotion with an end date. Monthly churn hazard is
//! a nonlinear function of the previous month's observables:
//!
//! - shutdown days combined with few traffic days,
//! - accumulated arrears,
//! - a promotion ending this month or next for a low-credit customer,
//! - the very-low-usage tag,
//!
//! plus Gaussian noise. A per-month intercept is calibrated by bisection so the
//! realized churn rate in every emitted month matches the requested rate.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::{Distribution, LogNormal, Normal};
use rayon::prelude::*;

use crate::dataset::{month_file_path, write_csv, ChurnState, CustomerRecord, Field, Value, YearMonth};
use crate::error::{Error, Result};
use crate::rng::{mix_seed, stream_rng};

/// Unobserved months simulated before the first emitted month.
const BURN_IN: usize = 3;
const MIN_MONTHS: usize = 5;
const GROUND_TRUTH_FILE: &str = "ground_truth.csv";

const CITY_TYPES: [(&str, f64); 4] = [("A", 0.2), ("B", 0.3), ("C", 0.3), ("D", 0.2)];
const MOBILE_TYPES: [&str; 6] = ["apple", "huawei", "oppo", "other", "vivo", "xiaomi"];
const FEES: [f64; 6] = [19.0, 39.0, 59.0, 79.0, 99.0, 129.0];

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub n_customers: usize,
    /// Consecutive months to emit, at least five.
    pub months: Vec<YearMonth>,
    /// Target monthly churn rate in `[0, 1)`; zero disables churn.
    pub churn_rate: f64,
    pub seed: u64,
    /// Standard deviation of the unexplained part of the churn log-odds.
    pub noise_level: f64,
    /// Per-cell probability that a numeric value is blanked.
    pub missing_rate: f64,
    /// Per-cell probability that a numeric value is negated.
    pub negative_rate: f64,
}

impl GeneratorSpec {
    pub fn new(n_customers: usize, months: Vec<YearMonth>, seed: u64) -> Self {
        Self {
            n_customers,
            months,
            churn_rate: 0.07,
            seed,
            noise_level: 0.5,
            missing_rate: 0.001,
            negative_rate: 0.0005,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.months.len() < MIN_MONTHS {
            return Err(Error::InvalidMonth(format!(
                "need at least {MIN_MONTHS} consecutive months, got {}",
                self.months.len()
            )));
        }
        for w in self.months.windows(2) {
            if w[1].months_since(w[0]) != 1 {
                return Err(Error::InvalidMonth(format!("{} does not follow {}", w[1], w[0])));
            }
        }
        if self.n_customers == 0 {
            return Err(Error::InvalidParameter("n_customers must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.churn_rate) {
            return Err(Error::InvalidParameter(format!(
                "churn_rate {} outside [0, 1)",
                self.churn_rate
            )));
        }
        for (name, v) in [
            ("noise_level", self.noise_level),
            ("missing_rate", self.missing_rate),
            ("negative_rate", self.negative_rate),
        ] {
            if !(v.is_finite() && v >= 0.0) || (name != "noise_level" && v > 1.0) {
                return Err(Error::InvalidParameter(format!("{name} {v} out of range")));
            }
        }
        Ok(())
    }
}

/// Per customer-month hazard and outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub customer_id: String,
    pub month: YearMonth,
    pub propensity: f64,
    pub churned: bool,
}

#[derive(Debug, Clone)]
pub struct SyntheticData {
    /// One vector of records per emitted month, in spec order.
    pub months: Vec<(YearMonth, Vec<CustomerRecord>)>,
    pub ground_truth: Vec<GroundTruth>,
    /// Calibrated log-odds intercept per emitted month.
    pub intercepts: Vec<f64>,
}

struct Profile {
    city: &'static str,
    mobile: &'static str,
    credit: f64,
    join: YearMonth,
    tdlte: bool,
    fddlte: bool,
    gat_roaming: bool,
    provincial_roaming: bool,
    fee: f64,
    promo_end: Option<YearMonth>,
}

/// One customer's observable month before corruption, plus its hazard score
/// for the following month (intercept excluded).
struct Simulated {
    months: Vec<CustomerRecord>,
    scores: Vec<f64>,
    uniforms: Vec<f64>,
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn pick_weighted<R: Rng>(rng: &mut R, items: &[(&'static str, f64)]) -> &'static str {
    let mut u: f64 = rng.random();
    for &(v, w) in items {
        if u < w {
            return v;
        }
        u -= w;
    }
    items[items.len() - 1].0
}

fn simulate_customer(spec: &GeneratorSpec, i: usize) -> Simulated {
    let mut rng = stream_rng(mix_seed(spec.seed, 0x6e6), i as u64);
    let first = spec.months[0];
    let total = BURN_IN + spec.months.len();
    let month_at = |j: usize| first.add_months(j as i32 - BURN_IN as i32);
    let std_normal = Normal::<f64>::new(0.0, 1.0).unwrap();
    let jitter = LogNormal::new(0.0, 0.3).unwrap();

    let promo_end = rng.random_bool(0.4).then(|| {
        let lo = BURN_IN as i32 - 2;
        let hi = total as i32 + 3;
        month_at(0).add_months(rng.random_range(lo..=hi))
    });
    let profile = Profile {
        city: pick_weighted(&mut rng, &CITY_TYPES),
        mobile: MOBILE_TYPES[rng.random_range(0..MOBILE_TYPES.len())],
        credit: (60.0 + 15.0 * std_normal.sample(&mut rng)).clamp(0.0, 100.0),
        join: first.add_months(-rng.random_range(3..=84)),
        tdlte: rng.random_bool(0.8),
        fddlte: rng.random_bool(0.3),
        gat_roaming: rng.random_bool(0.05),
        provincial_roaming: rng.random_bool(0.15),
        fee: FEES[rng.random_range(0..FEES.len())],
        promo_end,
    };
    let baseline = 0.5 * std_normal.sample(&mut rng);
    let decline = rng
        .random_bool(0.25)
        .then(|| (rng.random_range(0..total), rng.random_range(0.25..0.6)));
    let debt = rng
        .random_bool(0.15)
        .then(|| (rng.random_range(0..total), rng.random_range(20.0..60.0)));

    let mut ar = 0.0;
    let mut months = Vec::with_capacity(total);
    let mut scores = Vec::with_capacity(total);
    let mut uniforms = Vec::with_capacity(total);
    for j in 0..total {
        let month = month_at(j);
        let days = f64::from(month.days_in_month());
        ar = 0.6 * ar + 0.3 * std_normal.sample(&mut rng);
        let drop = decline.map_or(0.0, |(onset, slope)| slope * j.saturating_sub(onset) as f64);
        let z = baseline + ar - drop;
        let u = z.exp();
        let arrears = match debt {
            Some((onset, growth)) if j >= onset => growth * (j - onset + 1) as f64 * rng.sample(jitter),
            _ if rng.random_bool(0.1) => rng.random_range(0.0..10.0),
            _ => 0.0,
        };
        let low_use = if z < -1.0 { days * 0.5 * sigmoid(-2.0 * (z + 1.0)) } else { 0.0 };
        let shutdown = (arrears / 8.0 + low_use + rng.random_range(0.0..2.0)).floor().min(days);
        let traffic_days = (days * sigmoid(1.5 + 1.2 * z) + std_normal.sample(&mut rng))
            .round()
            .clamp(0.0, days);
        let promo_active = profile.promo_end.is_some_and(|end| month <= end);
        let promo_over = profile.promo_end.is_some_and(|end| month > end);
        let fee = if promo_over { profile.fee * 1.2 } else { profile.fee };
        let paid_data = 800.0 * u * rng.sample(jitter);
        let free_data = 200.0 * u * rng.sample(jitter);
        let all_data = paid_data + free_data;
        let paid_call = 150.0 * u * rng.sample(jitter);
        let credit = (profile.credit - 0.1 * arrears).max(0.0);
        let recharge = if arrears > 10.0 { fee * 0.3 } else { fee * rng.sample(jitter) };

        let mut r = CustomerRecord::empty(format!("C{i:07}"), month);
        let mut num = |f: Field, v: f64| r.set(f, Some(Value::Number(round2(v))));
        num(Field::Credit, credit);
        num(Field::GatRoamingTag, f64::from(u8::from(profile.gat_roaming)));
        num(Field::HalfStopFlag, f64::from(u8::from(shutdown > 0.0 && shutdown < days / 2.0)));
        num(Field::ProvincialRoamingTag, f64::from(u8::from(profile.provincial_roaming)));
        num(Field::TwoLowUserTag, f64::from(u8::from(u < 0.4)));
        num(Field::ThreeLowUserTag, f64::from(u8::from(u < 0.25)));
        num(Field::TdlteTag, f64::from(u8::from(profile.tdlte)));
        num(Field::FddlteTag, f64::from(u8::from(profile.fddlte)));
        let roaming = if profile.provincial_roaming { 40.0 * u * rng.sample(jitter) } else { 0.0 };
        num(Field::RoamingCallDuration, roaming);
        num(Field::PaidCallDuration, paid_call);
        num(Field::OverProductVoiceTag, f64::from(u8::from(paid_call > 300.0)));
        num(Field::DomesticLdCallDuration, 20.0 * u * rng.sample(jitter));
        let gat = if profile.gat_roaming { 10.0 * u * rng.sample(jitter) } else { 0.0 };
        num(Field::GatIntlLdCallDuration, gat);
        let intl = if rng.random_bool(0.03) { 5.0 * rng.sample(jitter) } else { 0.0 };
        num(Field::NonGatIntlLdCallDuration, intl);
        num(Field::IncomingCallCount, (60.0 * u * rng.sample(jitter)).round());
        num(Field::OutgoingCallCount, (50.0 * u * rng.sample(jitter)).round());
        num(Field::RechargeAmount, recharge);
        num(Field::MonthlyFee, fee);
        num(Field::GrantAmount, if promo_active { 0.2 * fee } else { 0.0 });
        num(Field::PaidDataTraffic, paid_data);
        num(Field::FreeDataTraffic, free_data);
        num(Field::ProvincialDataTraffic, 0.6 * all_data);
        num(Field::DomesticDataTraffic, 0.3 * all_data);
        let intl_data = if profile.gat_roaming { 0.1 * all_data } else { 0.0 };
        num(Field::InternationalDataTraffic, intl_data);
        num(Field::DataTrafficUsedDays, traffic_days);
        num(Field::ArrearsAmount, arrears);
        num(Field::OverProductVoiceIncome, 0.15 * (paid_call - 300.0).max(0.0));
        num(Field::OverProductStreamIncome, 0.03 * (paid_data - 2000.0).max(0.0));
        num(Field::ShutdownDays, shutdown);
        num(Field::SmsCount, (20.0 * u * rng.sample(jitter)).round());
        num(Field::PromotionTag, f64::from(u8::from(promo_active)));
        r.set(Field::CityType, Some(Value::Level(profile.city.to_string())));
        r.set(Field::MobileType, Some(Value::Level(profile.mobile.to_string())));
        r.set(Field::JoinMonth, Some(Value::Month(profile.join)));
        r.set(Field::PromotionEndDate, profile.promo_end.map(Value::Month));
        r.set(Field::ChurnStateStart, Some(Value::State(ChurnState::Active)));
        r.set(Field::ChurnStateEnd, Some(Value::State(ChurnState::Active)));

        // hazard for the next month, driven by this month's observables
        let next = month.add_months(1);
        let promo_ending = profile
            .promo_end
            .is_some_and(|end| (0..=1).contains(&end.months_since(next)));
        let mut s = 0.0;
        if shutdown >= 8.0 && traffic_days <= 15.0 {
            s += 3.0;
        }
        s += 1.5 * sigmoid((arrears - 80.0) / 15.0);
        if promo_ending {
            s += if credit < 50.0 { 5.0 } else { 3.5 };
        }
        s += spec.noise_level * std_normal.sample(&mut rng);
        scores.push(s);
        uniforms.push(rng.random::<f64>());
        months.push(r);
    }
    Simulated {
        months,
        scores,
        uniforms,
    }
}

/// Month index (into the emitted months) at which each customer churns, given
/// one intercept per emitted month.
fn churn_months(sims: &[Simulated], intercepts: &[f64]) -> Vec<Option<usize>> {
    sims.iter()
        .map(|s| {
            (0..intercepts.len()).find(|&m| {
                // hazard in emitted month m is driven by the month before it
                let j = BURN_IN + m;
                s.uniforms[j] < sigmoid(intercepts[m] + s.scores[j - 1])
            })
        })
        .collect()
}

/// Chooses the month-`m` intercept so that the share of month-`m` survivors
/// who churn in `m` is as close as possible to `rate`.
fn calibrate_month(sims: &[Simulated], alive: &[bool], m: usize, rate: f64) -> f64 {
    let j = BURN_IN + m;
    let at_risk: Vec<(f64, f64)> = sims
        .iter()
        .zip(alive)
        .filter(|(_, &a)| a)
        .map(|(s, _)| (s.scores[j - 1], s.uniforms[j]))
        .collect();
    if at_risk.is_empty() {
        return 0.0;
    }
    let realized = |a: f64| {
        at_risk.iter().filter(|&&(s, u)| u < sigmoid(a + s)).count() as f64 / at_risk.len() as f64
    };
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if realized(mid) < rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (realized(lo) - rate).abs() <= (realized(hi) - rate).abs() {
        lo
    } else {
        hi
    }
}

fn corrupt(spec: &GeneratorSpec, i: usize, records: &mut [CustomerRecord]) {
    if spec.missing_rate == 0.0 && spec.negative_rate == 0.0 {
        return;
    }
    let mut rng = stream_rng(mix_seed(spec.seed, 0xc0), i as u64);
    for r in records {
        for &f in Field::ALL {
            if !f.is_numeric() {
                continue;
            }
            let u: f64 = rng.random();
            if u < spec.missing_rate {
                r.set(f, None);
            } else if u < spec.missing_rate + spec.negative_rate {
                if let Some(v) = r.number(f).filter(|&v| v > 0.0) {
                    r.set(f, Some(Value::Number(-v)));
                }
            }
        }
    }
}

/// Simulates the population in memory.
pub fn simulate(spec: &GeneratorSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let sims: Vec<Simulated> = (0..spec.n_customers)
        .into_par_iter()
        .map(|i| simulate_customer(spec, i))
        .collect();
    let n_months = spec.months.len();

    let mut intercepts = Vec::with_capacity(n_months);
    let mut alive = vec![true; sims.len()];
    for m in 0..n_months {
        let a = if spec.churn_rate == 0.0 {
            f64::NEG_INFINITY
        } else {
            calibrate_month(&sims, &alive, m, spec.churn_rate)
        };
        intercepts.push(a);
        let j = BURN_IN + m;
        for (s, live) in sims.iter().zip(alive.iter_mut()) {
            if *live && s.uniforms[j] < sigmoid(a + s.scores[j - 1]) {
                *live = false;
            }
        }
    }
    let churn_at = churn_months(&sims, &intercepts);

    let mut months: Vec<(YearMonth, Vec<CustomerRecord>)> =
        spec.months.iter().map(|&m| (m, Vec::new())).collect();
    let mut ground_truth = Vec::new();
    for (i, (sim, churn)) in sims.into_iter().zip(churn_at).enumerate() {
        let last = churn.unwrap_or(n_months - 1);
        let mut emitted: Vec<CustomerRecord> = sim.months.into_iter().skip(BURN_IN).take(last + 1).collect();
        if let Some(c) = churn {
            emitted[c].set(Field::ChurnStateEnd, Some(Value::State(ChurnState::Churned)));
        }
        for (m, r) in emitted.iter().enumerate() {
            let j = BURN_IN + m;
            ground_truth.push(GroundTruth {
                customer_id: r.customer_id.clone(),
                month: r.month,
                propensity: sigmoid(intercepts[m] + sim.scores[j - 1]),
                churned: churn == Some(m),
            });
        }
        corrupt(spec, i, &mut emitted);
        for (m, r) in emitted.into_iter().enumerate() {
            months[m].1.push(r);
        }
    }
    ground_truth.sort_by(|a, b| a.month.cmp(&b.month).then_with(|| a.customer_id.cmp(&b.customer_id)));
    Ok(SyntheticData {
        months,
        ground_truth,
        intercepts,
    })
}

pub fn ground_truth_path(dir: &Path) -> PathBuf {
    dir.join(GROUND_TRUTH_FILE)
}

/// Writes one `customers_YYYYMM.csv` per month plus `ground_truth.csv` into
/// `out_dir`, returning the written month files.
pub fn generate_synthetic(spec: &GeneratorSpec, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    let data = simulate(spec)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut paths = Vec::new();
    for (month, records) in &data.months {
        let path = month_file_path(out_dir, *month);
        write_csv(&path, records)?;
        paths.push(path);
    }
    write_ground_truth(&ground_truth_path(out_dir), &data.ground_truth)?;
    Ok(paths)
}

fn write_ground_truth(path: &Path, rows: &[GroundTruth]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["customer_id", "month", "propensity", "churned"])
        .map_err(csv_err)?;
    for g in rows {
        w.write_record([
            g.customer_id.clone(),
            g.month.to_string(),
            format!("{:.6}", g.propensity),
            u8::from(g.churned).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_ground_truth(path: impl AsRef<Path>) -> Result<Vec<GroundTruth>> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let bad = |column: &'static str| Error::InvalidKey {
            column,
            value: rec.iter().collect::<Vec<_>>().join(","),
            row: row + 1,
        };
        out.push(GroundTruth {
            customer_id: rec.get(0).ok_or_else(|| bad("customer_id"))?.to_string(),
            month: rec.get(1).ok_or_else(|| bad("month"))?.parse()?,
            propensity: rec
                .get(2)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad("propensity"))?,
            churned: rec.get(3).ok_or_else(|| bad("churned"))? == "1",
        });
    }
    Ok(out)
}
