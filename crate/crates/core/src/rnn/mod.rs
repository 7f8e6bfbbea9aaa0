//! First-order weighted RNN language models.
//!
//! The hidden state evolves as `h' = σ(W h + W'_x)` where `x` is the symbol
//! just consumed; scores are `E' = softmax₂(O h' + O')`. A word
//! `w₁..w_n` is fed as `$, w₁, .., w_n`, and step `t` is scored against
//! `w_t` (with `w_{n+1} = $`), so `R(w) = Π_{t=1}^{n+1} E'_t[w_t]`.

mod json;
mod matrix;
mod softmax;

pub use json::RnnJson;
pub use matrix::SparseMatrix;
pub use softmax::{softmax2, softmax2_logits, Logit};

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::language::{Weight, WeightedLanguage, DEFAULT_PRECISION_BITS};
use crate::rational::Rational;
use std::fmt;
use std::sync::Arc;

/// Elementwise activation. Custom activations must be total on the
/// rationals and rational-valued.
#[derive(Clone)]
pub enum Activation {
    Relu,
    SaturatedLinear,
    Custom {
        name: String,
        apply: Arc<dyn Fn(&Rational) -> Rational + Send + Sync>,
    },
}

impl Activation {
    pub fn apply(&self, x: &Rational) -> Rational {
        match self {
            Activation::Relu => crate::rational::relu(x),
            Activation::SaturatedLinear => crate::rational::saturated_linear(x),
            Activation::Custom { apply, .. } => apply(x),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Activation::Relu => "relu",
            Activation::SaturatedLinear => "saturated_linear",
            Activation::Custom { name, .. } => name,
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "relu" => Ok(Activation::Relu),
            "saturated_linear" | "satlin" => Ok(Activation::SaturatedLinear),
            other => Err(Error::InvalidArgument(format!(
                "unknown activation `{other}`"
            ))),
        }
    }
}

impl fmt::Debug for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl PartialEq for Activation {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
    }
}

/// Dense construction parameters. `embeddings` and the rows of `output`
/// are indexed by `Σ_$` ids (alphabet symbols, then `$`).
#[derive(Clone, Debug)]
pub struct RnnParams {
    pub alphabet: Alphabet,
    pub h0: Vec<Rational>,
    pub transition: Vec<Vec<Rational>>,
    pub embeddings: Vec<Vec<Rational>>,
    pub output: Vec<Vec<Rational>>,
    pub output_bias: Vec<Logit>,
    pub activation: Activation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RnnLm {
    alphabet: Alphabet,
    h0: Vec<Rational>,
    transition: SparseMatrix,
    embeddings: Vec<Vec<Rational>>,
    output: SparseMatrix,
    output_bias: Vec<Logit>,
    activation: Activation,
    declared_consistent: bool,
    precision_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutput {
    pub hidden: Vec<Rational>,
    pub logits: Vec<Logit>,
    pub distribution: Vec<Weight>,
}

/// Evaluation state after a prefix: the current hidden vector, the
/// distribution it induces, and the product of the scores so far.
#[derive(Clone, Debug)]
pub struct RnnPrefix {
    hidden: Vec<Rational>,
    distribution: Vec<Weight>,
    product: Weight,
}

impl RnnPrefix {
    pub fn hidden(&self) -> &[Rational] {
        &self.hidden
    }
}

impl RnnLm {
    pub fn new(p: RnnParams) -> Result<Self> {
        let n = p.h0.len();
        let k = p.alphabet.len_with_marker();
        let dim = |what: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(Error::Dimension(format!(
                    "{what}: got {got}, expected {want}"
                )))
            }
        };
        dim("W rows", p.transition.len(), n)?;
        dim("embedding count", p.embeddings.len(), k)?;
        for (i, e) in p.embeddings.iter().enumerate() {
            dim(
                &format!("embedding of `{}`", p.alphabet.name(i)),
                e.len(),
                n,
            )?;
        }
        dim("O rows", p.output.len(), k)?;
        dim("O' length", p.output_bias.len(), k)?;
        Ok(RnnLm {
            transition: SparseMatrix::from_dense(&p.transition, n)?,
            output: SparseMatrix::from_dense(&p.output, n)?,
            alphabet: p.alphabet,
            h0: p.h0,
            embeddings: p.embeddings,
            output_bias: p.output_bias,
            activation: p.activation,
            declared_consistent: false,
            precision_bits: DEFAULT_PRECISION_BITS,
        })
    }

    /// Assembles a model from already-sparse parts (used by the compiler).
    pub(crate) fn from_sparse(
        alphabet: Alphabet,
        h0: Vec<Rational>,
        transition: SparseMatrix,
        embeddings: Vec<Vec<Rational>>,
        output: SparseMatrix,
        output_bias: Vec<Logit>,
        activation: Activation,
    ) -> Self {
        RnnLm {
            alphabet,
            h0,
            transition,
            embeddings,
            output,
            output_bias,
            activation,
            declared_consistent: false,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }

    pub fn declare_consistent(mut self, consistent: bool) -> Self {
        self.declared_consistent = consistent;
        self
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn hidden_dim(&self) -> usize {
        self.h0.len()
    }

    pub fn h0(&self) -> &[Rational] {
        &self.h0
    }

    pub fn transition(&self) -> &SparseMatrix {
        &self.transition
    }

    pub fn embeddings(&self) -> &[Vec<Rational>] {
        &self.embeddings
    }

    pub fn output(&self) -> &SparseMatrix {
        &self.output
    }

    pub fn output_bias(&self) -> &[Logit] {
        &self.output_bias
    }

    pub fn activation(&self) -> &Activation {
        &self.activation
    }

    /// Next hidden vector only: `σ(W h + W'_input)`.
    pub fn next_hidden(&self, h: &[Rational], input: usize) -> Result<Vec<Rational>> {
        if h.len() != self.hidden_dim() {
            return Err(Error::Dimension(format!(
                "hidden vector has {} entries, expected {}",
                h.len(),
                self.hidden_dim()
            )));
        }
        let emb = self
            .embeddings
            .get(input)
            .ok_or_else(|| Error::UnknownSymbol(format!("#{input}")))?;
        Ok(self
            .transition
            .mul_vec(h)
            .iter()
            .zip(emb)
            .map(|(x, b)| self.activation.apply(&(x + b)))
            .collect())
    }

    /// `O h + O'`.
    pub fn logits(&self, h: &[Rational]) -> Vec<Logit> {
        self.output
            .mul_vec(h)
            .iter()
            .zip(&self.output_bias)
            .map(|(x, b)| b.plus(x))
            .collect()
    }

    /// One recurrence step consuming `input` (an id in `Σ_$`).
    pub fn step(&self, h: &[Rational], input: usize) -> Result<StepOutput> {
        self.step_at(h, input, self.precision_bits)
    }

    pub fn step_at(&self, h: &[Rational], input: usize, bits: u32) -> Result<StepOutput> {
        let hidden = self.next_hidden(h, input)?;
        let logits = self.logits(&hidden);
        let distribution = softmax2_logits(&logits, bits);
        Ok(StepOutput {
            hidden,
            logits,
            distribution,
        })
    }

    pub fn weight_of(&self, w: &Word) -> Result<Weight> {
        WeightedLanguage::weight(self, w)
    }

    /// `Σ_{|w| ≤ max_len} R(w)`.
    pub fn mass_upto(&self, max_len: usize) -> Result<Weight> {
        crate::language::cumulative_mass(self, max_len)
    }
}

impl WeightedLanguage for RnnLm {
    type Prefix = RnnPrefix;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn declared_consistent(&self) -> bool {
        self.declared_consistent
    }

    fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    fn start(&self, bits: u32) -> Result<RnnPrefix> {
        let out = self.step_at(&self.h0, self.alphabet.end_marker(), bits)?;
        Ok(RnnPrefix {
            hidden: out.hidden,
            distribution: out.distribution,
            product: Weight::one(),
        })
    }

    fn extend(&self, prefix: &RnnPrefix, symbol: usize, bits: u32) -> Result<RnnPrefix> {
        if symbol >= self.alphabet.len() {
            return Err(Error::UnknownSymbol(format!("#{symbol}")));
        }
        let product = prefix.product.mul(&prefix.distribution[symbol]);
        let out = self.step_at(&prefix.hidden, symbol, bits)?;
        Ok(RnnPrefix {
            hidden: out.hidden,
            distribution: out.distribution,
            product,
        })
    }

    fn finish(&self, prefix: &RnnPrefix) -> Result<Weight> {
        Ok(prefix
            .product
            .mul(&prefix.distribution[self.alphabet.end_marker()]))
    }
}
