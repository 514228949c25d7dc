//! Noise-reduction methods: phonetic spell correction, spell-corrected
//! paraphrasing, back-translation, and masking with fill-in.

pub mod client;
pub mod dictionary;
pub mod mask;
pub mod phonetic;
pub mod spell;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use client::{
    ClientMaskPredictor, FixtureClient, FixtureEntry, SubprocessClient, Task, TextClient, TranslatorClient,
};
pub use dictionary::{Dictionary, RejectedWord, Vocabulary};
pub use mask::{
    count_bigrams, detect_oov, fill_masks, mask_oov, mask_random, BigramFillPredictor, MaskFillProvider,
    MaskQuery, MASK_TOKEN,
};
pub use phonetic::{phonetic_encode, PhoneticCode, PhoneticTable};
pub use spell::{levenshtein, spell_correct, CorrectionResult, Edit, MaxDistance};

/// Round trip through a pivot language; the result is kept verbatim.
pub fn back_translate(sentence: &str, client: &mut dyn TextClient, source: &str, pivot: &str) -> Result<String> {
    let there = client.request(Task::Translate, source, pivot, sentence)?;
    client.request(Task::Translate, pivot, source, &there)
}

/// Spell-corrects, then asks the client for one paraphrase of the result.
pub fn paraphrase(
    sentence: &str,
    client: &mut dyn TextClient,
    dict: &Dictionary,
    max_dist: MaxDistance,
    lang: &str,
) -> Result<String> {
    let corrected = spell_correct(sentence, dict, max_dist).corrected;
    client.request(Task::Paraphrase, lang, lang, &corrected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Spell,
    SpellParaphrase,
    BackTranslate,
    MaskOovFill,
    MaskRandomFill,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Spell,
        Method::SpellParaphrase,
        Method::BackTranslate,
        Method::MaskOovFill,
        Method::MaskRandomFill,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spell => "spell",
            Method::SpellParaphrase => "paraphrase",
            Method::BackTranslate => "backtranslate",
            Method::MaskOovFill => "mask-oov",
            Method::MaskRandomFill => "mask-random",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

/// Everything a reduction method may need. Only the pieces required by the
/// chosen method must be present.
pub struct Resources<'a> {
    pub dictionary: Option<&'a Dictionary>,
    pub client: Option<&'a mut dyn TextClient>,
    pub predictor: Option<&'a mut dyn MaskFillProvider>,
    pub max_dist: MaxDistance,
    /// Masking probability for [`Method::MaskRandomFill`].
    pub mask_probability: f64,
    pub seed: u64,
    pub source_lang: String,
    pub pivot_lang: String,
}

impl Default for Resources<'_> {
    fn default() -> Self {
        Resources {
            dictionary: None,
            client: None,
            predictor: None,
            max_dist: MaxDistance::Adaptive,
            mask_probability: 0.2,
            seed: 0,
            source_lang: "bn".into(),
            pivot_lang: "en".into(),
        }
    }
}

fn missing(what: &str, method: Method) -> Error {
    Error::MissingResource(format!("{what} required for {method}"))
}

/// Applies one reduction method to a sentence.
pub fn reduce(sentence: &str, method: Method, res: &mut Resources<'_>) -> Result<String> {
    match method {
        Method::Spell => {
            let dict = res.dictionary.ok_or_else(|| missing("dictionary", method))?;
            Ok(spell_correct(sentence, dict, res.max_dist).corrected)
        }
        Method::SpellParaphrase => {
            let dict = res.dictionary.ok_or_else(|| missing("dictionary", method))?;
            let client = res.client.as_deref_mut().ok_or_else(|| missing("client", method))?;
            paraphrase(sentence, client, dict, res.max_dist, &res.source_lang)
        }
        Method::BackTranslate => {
            let client = res.client.as_deref_mut().ok_or_else(|| missing("client", method))?;
            back_translate(sentence, client, &res.source_lang, &res.pivot_lang)
        }
        Method::MaskOovFill => {
            let dict = res.dictionary.ok_or_else(|| missing("dictionary", method))?;
            let predictor = res.predictor.as_deref_mut().ok_or_else(|| missing("predictor", method))?;
            fill_masks(&mask_oov(sentence, dict), predictor)
        }
        Method::MaskRandomFill => {
            let predictor = res.predictor.as_deref_mut().ok_or_else(|| missing("predictor", method))?;
            fill_masks(&mask_random(sentence, res.mask_probability, res.seed)?, predictor)
        }
    }
}
