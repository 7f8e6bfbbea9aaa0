//! JSON form: `{ "alphabet", "N", "h0", "W", "emb", "O", "Obias", "activation" }`.

use super::{Activation, Logit, RnnLm, RnnParams};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::language::WeightedLanguage;
use crate::rational::{serde_str, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RnnJson {
    pub alphabet: Alphabet,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(with = "serde_str::vec")]
    pub h0: Vec<Rational>,
    #[serde(rename = "W", with = "serde_str::matrix")]
    pub w: Vec<Vec<Rational>>,
    pub emb: BTreeMap<String, Vec<String>>,
    #[serde(rename = "O", with = "serde_str::matrix")]
    pub o: Vec<Vec<Rational>>,
    #[serde(rename = "Obias")]
    pub obias: Vec<String>,
    pub activation: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub consistent: bool,
}

impl From<&RnnLm> for RnnJson {
    fn from(r: &RnnLm) -> Self {
        let a = r.alphabet().clone();
        let emb = r
            .embeddings()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                (
                    a.name(i).to_string(),
                    e.iter().map(crate::rational::format_rational).collect(),
                )
            })
            .collect();
        RnnJson {
            n: r.hidden_dim(),
            h0: r.h0().to_vec(),
            w: r.transition().to_dense(),
            emb,
            o: r.output().to_dense(),
            obias: r.output_bias().iter().map(Logit::to_string).collect(),
            activation: r.activation().name().to_string(),
            consistent: r.declared_consistent(),
            alphabet: a,
        }
    }
}

impl TryFrom<RnnJson> for RnnLm {
    type Error = Error;

    fn try_from(j: RnnJson) -> Result<Self> {
        if j.h0.len() != j.n {
            return Err(Error::Dimension(format!(
                "h0 has {} entries but N = {}",
                j.h0.len(),
                j.n
            )));
        }
        let k = j.alphabet.len_with_marker();
        let mut embeddings = vec![None; k];
        for (sym, vec) in &j.emb {
            let id = j.alphabet.id_with_marker(sym)?;
            let v = vec
                .iter()
                .map(|x| crate::rational::parse_rational(x))
                .collect::<Result<Vec<_>>>()?;
            embeddings[id] = Some(v);
        }
        let embeddings = embeddings
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| {
                    Error::Dimension(format!("missing embedding for `{}`", j.alphabet.name(i)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let output_bias = j
            .obias
            .iter()
            .map(|b| Logit::parse(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(RnnLm::new(RnnParams {
            alphabet: j.alphabet,
            h0: j.h0,
            transition: j.w,
            embeddings,
            output: j.o,
            output_bias,
            activation: Activation::from_name(&j.activation)?,
        })?
        .declare_consistent(j.consistent))
    }
}

impl RnnLm {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RnnJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<RnnJson>(text)?.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Word;
    use crate::language::Weight;
    use crate::rational::rat;

    const TOY: &str = r#"{
        "alphabet": ["0", "1"], "N": 2, "h0": ["0", "0"],
        "W": [["1", "0"], ["0", "1"]],
        "emb": {"0": ["0", "0"], "1": ["0", "0"], "$": ["0", "0"]},
        "O": [["1", "0"], ["1", "0"], ["0", "1"]],
        "Obias": ["1", "1", "0"],
        "activation": "relu", "consistent": true
    }"#;

    #[test]
    fn parses_schema() {
        let r = RnnLm::from_json(TOY).unwrap();
        assert!(r.declared_consistent());
        let w = Alphabet::binary().parse_word("11").unwrap();
        assert_eq!(r.weight_of(&w).unwrap(), Weight::Exact(rat(4, 125)));
        assert_eq!(
            r.weight_of(&Word::empty()).unwrap(),
            Weight::Exact(rat(1, 5))
        );
    }

    #[test]
    fn round_trips() {
        let r = RnnLm::from_json(TOY).unwrap();
        assert_eq!(RnnLm::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn missing_embedding_is_an_error() {
        let broken = TOY.replace(r#""$": ["0", "0"]"#, r#""1": ["0", "0"]"#);
        assert!(RnnLm::from_json(&broken).is_err());
    }
}
