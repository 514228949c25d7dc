//! Soundex-style phonetic codes driven by a per-script consonant table.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::text::parse_code_point;

const BANGLA_TABLE: &str = include_str!("../../data/phonetic_bn.tsv");
const LATIN_TEST_TABLE: &str = include_str!("../../data/phonetic_latin_test.tsv");

/// Number of class digits after the leading letter.
pub const CODE_DIGITS: usize = 3;

/// Maps letters to articulation-class digits. Digit 0 marks a letter of the
/// script that carries no class (vowels, vowel signs); unlisted characters
/// are ignored by the encoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneticTable {
    classes: HashMap<char, u8>,
    scripts: BTreeSet<u32>,
}

// Latin (through Latin Extended-B) is one script; elsewhere a 128-code-point
// block stands in for a script, which holds for the Indic blocks.
fn script_key(c: char) -> u32 {
    let cp = c as u32;
    if cp < 0x250 {
        0
    } else {
        cp >> 7
    }
}

impl PhoneticTable {
    pub fn parse(src: &str) -> std::result::Result<Self, (usize, String)> {
        let mut classes = HashMap::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let (Some(cp), Some(digit), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err((lineno + 1, "expected CODEPOINT<TAB>digit".into()));
            };
            let c = parse_code_point(cp).ok_or((lineno + 1, format!("bad code point {cp:?}")))?;
            let d: u8 = match digit.trim().parse() {
                Ok(d) if d <= 9 => d,
                _ => return Err((lineno + 1, format!("bad class digit {digit:?}"))),
            };
            classes.insert(c, d);
        }
        let scripts = classes.keys().map(|&c| script_key(c)).collect();
        Ok(PhoneticTable { classes, scripts })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path)?;
        Self::parse(&src).map_err(|(line, reason)| Error::malformed(path, line, 1, reason))
    }

    /// The shipped Bangla table.
    pub fn bangla() -> &'static PhoneticTable {
        static TABLE: OnceLock<PhoneticTable> = OnceLock::new();
        TABLE.get_or_init(|| PhoneticTable::parse(BANGLA_TABLE).expect("builtin Bangla table"))
    }

    /// Tiny Latin table: b,p=1 t,d=2 k,g=3 s,z=4.
    pub fn latin_test() -> &'static PhoneticTable {
        static TABLE: OnceLock<PhoneticTable> = OnceLock::new();
        TABLE.get_or_init(|| PhoneticTable::parse(LATIN_TEST_TABLE).expect("builtin Latin table"))
    }

    pub fn class(&self, c: char) -> Option<u8> {
        self.classes.get(&c).copied()
    }

    /// A token is native when it has letters and all of them belong to the
    /// script this table covers.
    pub fn is_native(&self, token: &str) -> bool {
        let mut letters = token.chars().filter(|c| c.is_alphabetic()).peekable();
        letters.peek().is_some() && letters.all(|c| self.scripts.contains(&script_key(c)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhoneticCode(String);

impl PhoneticCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PhoneticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// First letter (upper-cased where the script has case) followed by three
/// class digits: classless and unlisted characters are dropped, runs of the
/// same digit collapse, and the result is truncated or zero-padded.
pub fn phonetic_encode(word: &str, table: &PhoneticTable) -> Result<PhoneticCode> {
    let mut chars = word.chars();
    let first = chars.next().ok_or(Error::EmptyWord)?;
    let mut upper = first.to_uppercase();
    let lead = match (upper.next(), upper.next()) {
        (Some(u), None) => u,
        _ => first,
    };

    let mut digits: Vec<u8> = Vec::with_capacity(CODE_DIGITS);
    for c in chars {
        let Some(d) = table.class(c).filter(|&d| d > 0) else {
            continue;
        };
        if digits.last() != Some(&d) {
            digits.push(d);
        }
        if digits.len() == CODE_DIGITS {
            break;
        }
    }
    let mut code = String::with_capacity(lead.len_utf8() + CODE_DIGITS);
    code.push(lead);
    for i in 0..CODE_DIGITS {
        code.push(char::from(b'0' + digits.get(i).copied().unwrap_or(0)));
    }
    Ok(PhoneticCode(code))
}
