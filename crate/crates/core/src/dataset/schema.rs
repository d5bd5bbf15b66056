//! Customer-month record schema.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Calendar month stored as `YYYYMM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth(u32);

impl YearMonth {
    pub fn new(year: u32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) || !(1000..=9999).contains(&year) {
            return Err(Error::InvalidMonth(format!("{year:04}{month:02}")));
        }
        Ok(Self(year * 100 + month))
    }

    pub fn year(self) -> u32 {
        self.0 / 100
    }

    pub fn month(self) -> u32 {
        self.0 % 100
    }

    pub fn key(self) -> u32 {
        self.0
    }

    fn ordinal(self) -> i64 {
        i64::from(self.year()) * 12 + i64::from(self.month()) - 1
    }

    fn from_ordinal(ord: i64) -> Self {
        let year = ord.div_euclid(12) as u32;
        let month = ord.rem_euclid(12) as u32 + 1;
        Self(year * 100 + month)
    }

    /// Shifts by a signed number of months.
    pub fn add_months(self, delta: i32) -> Self {
        Self::from_ordinal(self.ordinal() + i64::from(delta))
    }

    /// Signed month difference `self - origin`.
    pub fn months_since(self, origin: YearMonth) -> i32 {
        (self.ordinal() - origin.ordinal()) as i32
    }

    pub fn days_in_month(self) -> u32 {
        match self.month() {
            1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
            4 | 6 | 9 | 11 => 30,
            _ => {
                let y = self.year();
                if (y.is_multiple_of(4) && !y.is_multiple_of(100)) || y.is_multiple_of(400) {
                    29
                } else {
                    28
                }
            }
        }
    }

    /// Inclusive range `from..=to`.
    pub fn range(from: YearMonth, to: YearMonth) -> Vec<YearMonth> {
        let n = to.months_since(from);
        (0..=n.max(-1)).map(|i| from.add_months(i)).collect()
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() != 6 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::InvalidMonth(s.to_string()));
        }
        let v: u32 = s.parse().map_err(|_| Error::InvalidMonth(s.to_string()))?;
        Self::new(v / 100, v % 100)
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:06}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChurnState {
    Active,
    Churned,
}

impl ChurnState {
    pub fn as_str(self) -> &'static str {
        match self {
            ChurnState::Active => "active",
            ChurnState::Churned => "churned",
        }
    }
}

impl FromStr for ChurnState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "active" => Ok(ChurnState::Active),
            "churned" => Ok(ChurnState::Churned),
            other => Err(Error::UnknownName {
                kind: "churn state",
                name: other.to_string(),
            }),
        }
    }
}

/// How a field is stored, cleaned and encoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// Nonnegative real quantity (durations, counts, amounts, traffic).
    Quantity,
    /// Nonnegative day count bounded by the length of the month.
    Days,
    /// 0/1 tag.
    Flag,
    /// Free-form categorical level.
    Category,
    /// Year-month that is always present (imputed when missing).
    Month,
    /// Year-month whose absence carries meaning; never imputed.
    OptionalMonth,
    State,
}

macro_rules! fields {
    ($( $variant:ident => ($name:literal, $kind:ident) ),* $(,)?) => {
        /// The customer variables carried by every monthly extract.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Field { $( $variant ),* }

        impl Field {
            pub const ALL: &'static [Field] = &[ $( Field::$variant ),* ];

            pub fn name(self) -> &'static str {
                match self { $( Field::$variant => $name ),* }
            }

            pub fn kind(self) -> FieldKind {
                match self { $( Field::$variant => FieldKind::$kind ),* }
            }
        }
    };
}

fields! {
    // customer profile
    CityType => ("city_type", Category),
    Credit => ("credit", Quantity),
    JoinMonth => ("join_month", Month),
    GatRoamingTag => ("gat_roaming_tag", Flag),
    HalfStopFlag => ("half_stop_flag", Flag),
    ProvincialRoamingTag => ("provincial_roaming_tag", Flag),
    TwoLowUserTag => ("two_low_user_tag", Flag),
    ThreeLowUserTag => ("three_low_user_tag", Flag),
    MobileType => ("mobile_type", Category),
    TdlteTag => ("tdlte_tag", Flag),
    FddlteTag => ("fddlte_tag", Flag),
    // call details
    RoamingCallDuration => ("roaming_call_duration", Quantity),
    PaidCallDuration => ("paid_call_duration", Quantity),
    OverProductVoiceTag => ("over_product_voice_tag", Flag),
    DomesticLdCallDuration => ("domestic_ld_call_duration", Quantity),
    GatIntlLdCallDuration => ("gat_intl_ld_call_duration", Quantity),
    NonGatIntlLdCallDuration => ("non_gat_intl_ld_call_duration", Quantity),
    IncomingCallCount => ("incoming_call_count", Quantity),
    OutgoingCallCount => ("outgoing_call_count", Quantity),
    // bill details
    RechargeAmount => ("recharge_amount", Quantity),
    MonthlyFee => ("monthly_fee", Quantity),
    GrantAmount => ("grant_amount", Quantity),
    // data traffic
    PaidDataTraffic => ("paid_data_traffic", Quantity),
    FreeDataTraffic => ("free_data_traffic", Quantity),
    ProvincialDataTraffic => ("provincial_data_traffic", Quantity),
    DomesticDataTraffic => ("domestic_data_traffic", Quantity),
    InternationalDataTraffic => ("international_data_traffic", Quantity),
    DataTrafficUsedDays => ("data_traffic_used_days", Days),
    // month state
    ArrearsAmount => ("arrears_amount", Quantity),
    OverProductVoiceIncome => ("over_product_voice_income", Quantity),
    OverProductStreamIncome => ("over_product_stream_income", Quantity),
    ChurnStateStart => ("churn_state_start", State),
    ChurnStateEnd => ("churn_state_end", State),
    // other
    ShutdownDays => ("shutdown_days", Days),
    SmsCount => ("sms_count", Quantity),
    PromotionTag => ("promotion_tag", Flag),
    PromotionEndDate => ("promotion_end_date", OptionalMonth),
}

impl Field {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn by_name(name: &str) -> Option<Field> {
        Field::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Nonnegative numeric fields subject to clamping.
    pub fn is_numeric(self) -> bool {
        matches!(
            self.kind(),
            FieldKind::Quantity | FieldKind::Days | FieldKind::Flag
        )
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single parsed cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Level(String),
    Month(YearMonth),
    State(ChurnState),
}

impl Value {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_month(&self) -> Option<YearMonth> {
        match self {
            Value::Month(m) => Some(*m),
            _ => None,
        }
    }

    pub fn as_state(&self) -> Option<ChurnState> {
        match self {
            Value::State(s) => Some(*s),
            _ => None,
        }
    }

    /// Parses a raw cell for the given field. `None` means missing or unparseable.
    pub fn parse(field: Field, raw: &str) -> Option<Value> {
        let raw = raw.trim();
        if raw.is_empty() {
            return None;
        }
        match field.kind() {
            FieldKind::Quantity | FieldKind::Days | FieldKind::Flag => raw
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Value::Number),
            FieldKind::Category => Some(Value::Level(raw.to_string())),
            FieldKind::Month | FieldKind::OptionalMonth => raw.parse().ok().map(Value::Month),
            FieldKind::State => raw.parse().ok().map(Value::State),
        }
    }

    /// Canonical textual form, as written to CSV.
    pub fn render(&self) -> String {
        match self {
            Value::Number(v) => format!("{v}"),
            Value::Level(s) => s.clone(),
            Value::Month(m) => m.to_string(),
            Value::State(s) => s.as_str().to_string(),
        }
    }
}

/// One customer in one month.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomerRecord {
    pub customer_id: String,
    pub month: YearMonth,
    values: Vec<Option<Value>>,
}

impl CustomerRecord {
    /// Record with every variable missing.
    pub fn empty(customer_id: impl Into<String>, month: YearMonth) -> Self {
        Self {
            customer_id: customer_id.into(),
            month,
            values: vec![None; Field::ALL.len()],
        }
    }

    pub fn get(&self, field: Field) -> Option<&Value> {
        self.values[field.index()].as_ref()
    }

    pub fn number(&self, field: Field) -> Option<f64> {
        self.get(field).and_then(Value::as_number)
    }

    pub fn set(&mut self, field: Field, value: Option<Value>) {
        self.values[field.index()] = value;
    }

    pub fn with(mut self, field: Field, value: Value) -> Self {
        self.set(field, Some(value));
        self
    }

    pub fn end_state(&self) -> Option<ChurnState> {
        self.get(Field::ChurnStateEnd).and_then(Value::as_state)
    }

    /// Number of missing variables, counting an absent promotion end date.
    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }
}
