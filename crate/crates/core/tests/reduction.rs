use noisekit::reduce::{
    back_translate, levenshtein, mask_random, spell_correct, Dictionary, MaxDistance, PhoneticTable, SubprocessClient,
    Task, TextClient, MASK_TOKEN,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straightforward full-matrix edit distance used as an oracle.
fn wagner_fischer(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
        }
    }
    d[a.len()][b.len()]
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

#[test]
fn levenshtein_metric_axioms() {
    let alphabet: Vec<char> = "abcকখগা".chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..10_000 {
        let a = random_word(&mut rng, &alphabet, 7);
        let b = random_word(&mut rng, &alphabet, 7);
        let c = random_word(&mut rng, &alphabet, 7);
        let ab = levenshtein(&a, &b);
        assert_eq!(levenshtein(&a, &a), 0);
        assert_eq!(ab == 0, a == b);
        assert_eq!(ab, levenshtein(&b, &a));
        assert!(levenshtein(&a, &c) <= ab + levenshtein(&b, &c));
        let (la, lb) = (a.chars().count(), b.chars().count());
        assert!(ab >= la.abs_diff(lb) && ab <= la.max(lb));
        if i % 10 == 0 {
            assert_eq!(ab, wagner_fischer(&a, &b), "{a:?} {b:?}");
        }
    }
}

const CONSONANTS: &str = "কখগঘচছজঝটঠডঢতথদধনপফবভমযরলশষসহ";
const VOWEL_SIGNS: &str = "ািীুূেৈোৌ";

fn bangla_word(rng: &mut ChaCha8Rng) -> String {
    let consonants: Vec<char> = CONSONANTS.chars().collect();
    let signs: Vec<char> = VOWEL_SIGNS.chars().collect();
    let syllables = rng.gen_range(1..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(*consonants.choose(rng).unwrap());
        if rng.gen_bool(0.6) {
            w.push(*signs.choose(rng).unwrap());
        }
    }
    w
}

fn perturb(rng: &mut ChaCha8Rng, word: &str) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    let signs: Vec<char> = VOWEL_SIGNS.chars().collect();
    let i = rng.gen_range(0..chars.len());
    match rng.gen_range(0..3) {
        0 if chars.len() > 1 => {
            chars.remove(i);
        }
        1 => chars.insert(i + 1, *signs.choose(rng).unwrap()),
        _ => chars[i] = *signs.choose(rng).unwrap(),
    }
    chars.into_iter().collect()
}

#[test]
fn spell_correct_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let table = PhoneticTable::bangla();
    let mut dict = Dictionary::new(table.clone());
    let mut words = Vec::new();
    while words.len() < 300 {
        let w = bangla_word(&mut rng);
        if dict.insert(&w, rng.gen_range(1..50)).is_ok() {
            words.push(w);
        }
    }
    let mut changed = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(3..10);
        let mut parts = Vec::new();
        for _ in 0..n {
            let w = words.choose(&mut rng).unwrap();
            parts.push(if rng.gen_bool(0.3) { perturb(&mut rng, w) } else { w.clone() });
            if rng.gen_bool(0.1) {
                parts.push("।".to_string());
            }
        }
        let sentence = parts.join(" ");
        let once = spell_correct(&sentence, &dict, MaxDistance::Adaptive);
        let twice = spell_correct(&once.corrected, &dict, MaxDistance::Adaptive);
        assert_eq!(twice.corrected, once.corrected, "{sentence}");
        assert!(twice.edits.is_empty());
        for e in &once.edits {
            assert!(dict.contains(&e.replacement));
            assert_eq!(dict.code_of(&e.replacement), dict.code_of(&e.original));
        }
        changed += usize::from(!once.edits.is_empty());
    }
    assert!(changed > 100, "only {changed} sentences corrected");
}

#[test]
fn mask_random_rate_within_binomial_interval() {
    let n = 10_000usize;
    let p = 0.2;
    let sentence = vec!["শব্দ"; n].join(" ");
    // Two-sided 99.9% normal interval for the masked fraction.
    let half_width = 3.2905 * (p * (1.0 - p) / n as f64).sqrt();
    for seed in 0..5 {
        let masked = mask_random(&sentence, p, seed).unwrap();
        let rate = masked.matches(MASK_TOKEN).count() as f64 / n as f64;
        assert!((rate - p).abs() <= half_width, "seed {seed}: rate {rate}");
        assert!((0.18..=0.22).contains(&rate));
    }
}

fn reverse_echo_command() -> String {
    let script = r#"
import json, sys
for line in sys.stdin:
    req = json.loads(line)
    sys.stdout.write(json.dumps({"id": req["id"], "text": req["text"][::-1]}) + "\n")
    sys.stdout.flush()
"#;
    format!("python3 -c '{script}'")
}

#[test]
fn subprocess_reverse_echo_round_trip() {
    let mut client = SubprocessClient::spawn(&reverse_echo_command()).unwrap();
    assert_eq!(client.request(Task::Translate, "bn", "en", "abc").unwrap(), "cba");
    for s in ["আমি ভাত খাই", "mixed ভাষা text", ""] {
        assert_eq!(back_translate(s, &mut client, "bn", "en").unwrap(), s);
    }
}

#[test]
fn subprocess_wrong_id_is_rejected() {
    let cmd = r#"python3 -c 'import sys
for line in sys.stdin:
    print("{\"id\": 99, \"text\": \"x\"}", flush=True)'"#;
    let mut client = SubprocessClient::spawn(cmd).unwrap();
    let err = client.request(Task::Translate, "bn", "en", "a").unwrap_err();
    assert_eq!(err.code(), "CLIENT_UNAVAILABLE");
}
