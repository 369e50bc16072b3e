//! Survey records: the computed result for one x next to both predictions.

use adlv::adlv_engine::{ClassContext, PalcovePrediction, Prediction, Status};
use adlv::lattice::fmt_q;
use adlv::root_data::fmt_weyl_word;
use adlv::ExtAffWeylElt;
use anyhow::Result;
use serde::{Deserialize, Serialize};

/// Version of the record layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SurveyRecord {
    pub schema: u32,
    pub x: String,
    pub word: String,
    pub length: u32,
    pub shrunken: bool,
    pub eta1: String,
    pub eta2: String,
    pub class_key: String,
    pub status: String,
    pub dim: Option<i64>,
    pub witness_w: Option<String>,
    pub cutoff: usize,
    pub swept: usize,
    pub certificates: Vec<serde_json::Value>,
    /// `empty` or the predicted dimension; absent unless b is basic and x shrunken.
    pub predicted_shrunken: Option<String>,
    /// `empty` or `nonempty`; absent unless b is basic.
    pub predicted_palcove: Option<String>,
    pub palcove_witness: Option<String>,
    pub agree_shrunken: Option<bool>,
    pub agree_palcove: Option<bool>,
}

/// Runs the engine and both predictions on x.
pub fn compute(ctx: &ClassContext, x: &ExtAffWeylElt, cutoff: Option<usize>) -> Result<SurveyRecord> {
    let d = ctx.d;
    let r = ctx.solve(x, cutoff)?;
    let (dim, witness_w) = match &r.status {
        Status::NonEmpty { dim, witness_w } => (Some(*dim), Some(d.fmt_elt(witness_w))),
        _ => (None, None),
    };
    let certificates = match &r.status {
        Status::EmptyCertified(c) => vec![serde_json::to_value(c)?],
        _ => vec![],
    };
    let basic = d.is_basic(&ctx.class);
    let shrunken = d.is_shrunken(x);
    let predicted_shrunken = if basic && shrunken {
        Some(match ctx.predict_shrunken(x)? {
            Prediction::Empty => "empty".to_string(),
            Prediction::NonEmpty { dim } => fmt_q(&dim),
        })
    } else {
        None
    };
    let (predicted_palcove, palcove_witness) = if basic {
        match ctx.predict_palcove(x)? {
            PalcovePrediction::Empty { witness } => (Some("empty".to_string()), Some(witness)),
            PalcovePrediction::NonEmptyPredicted => (Some("nonempty".to_string()), None),
        }
    } else {
        (None, None)
    };
    let mut rec = SurveyRecord {
        schema: SCHEMA_VERSION,
        x: d.fmt_elt(x),
        word: d.fmt_reduced(&d.reduced_word(x)),
        length: d.length(x),
        shrunken,
        eta1: fmt_weyl_word(d, d.eta1(x)),
        eta2: fmt_weyl_word(d, d.eta2(x)),
        class_key: d.class_key(&ctx.class),
        status: r.status_name().to_string(),
        dim,
        witness_w,
        cutoff: r.cutoff,
        swept: r.swept,
        certificates,
        predicted_shrunken,
        predicted_palcove,
        palcove_witness,
        agree_shrunken: None,
        agree_palcove: None,
    };
    set_agreement(&mut rec);
    Ok(rec)
}

/// Agreement flags from the other fields: a prediction agrees when it names
/// the computed status (and, for the dimension rule, the computed dimension).
pub fn set_agreement(rec: &mut SurveyRecord) {
    let computed = rec.dim.map(|k| k.to_string());
    rec.agree_shrunken = rec.predicted_shrunken.as_ref().map(|p| match &computed {
        Some(k) => p == k,
        None => p == "empty",
    });
    rec.agree_palcove = rec.predicted_palcove.as_ref().map(|p| (p == "nonempty") == computed.is_some());
}

/// Counts over a finished survey.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub schema: u32,
    pub summary: bool,
    pub records: usize,
    pub nonempty: usize,
    pub empty_certified: usize,
    pub empty_up_to_cutoff: usize,
    pub shrunken_checked: usize,
    pub shrunken_disagree: usize,
    pub palcove_checked: usize,
    pub palcove_disagree: usize,
}

impl Summary {
    pub fn add(&mut self, r: &SurveyRecord) {
        self.schema = SCHEMA_VERSION;
        self.summary = true;
        self.records += 1;
        match r.status.as_str() {
            "nonempty" => self.nonempty += 1,
            "empty-certified" => self.empty_certified += 1,
            _ => self.empty_up_to_cutoff += 1,
        }
        if let Some(a) = r.agree_shrunken {
            self.shrunken_checked += 1;
            self.shrunken_disagree += usize::from(!a);
        }
        if let Some(a) = r.agree_palcove {
            self.palcove_checked += 1;
            self.palcove_disagree += usize::from(!a);
        }
    }

    pub fn disagreements(&self) -> usize {
        self.shrunken_disagree + self.palcove_disagree
    }
}

pub const TSV_HEADER: &str = "x\tword\tlength\tshrunken\tstatus\tdim\tpredicted_shrunken\tpredicted_palcove";

pub fn tsv_row(r: &SurveyRecord) -> String {
    let opt = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.x,
        r.word,
        r.length,
        r.shrunken,
        r.status,
        r.dim.map_or("-".into(), |k| k.to_string()),
        opt(&r.predicted_shrunken),
        opt(&r.predicted_palcove)
    )
}
