//! English Snowball (Porter2) suffix-stripping stemmer.
//!
//! Operates on lowercased tokens. Tokens of two characters or fewer, and a
//! small list of invariant words, are returned unchanged per the algorithm.

const DOUBLES: [&[u8]; 9] = [
    b"bb", b"dd", b"ff", b"gg", b"mm", b"nn", b"pp", b"rr", b"tt",
];

/// Words stemmed by table lookup before the rule steps run.
const EXCEPTIONS: [(&str, &str); 18] = [
    ("skis", "ski"),
    ("skies", "sky"),
    ("dying", "die"),
    ("lying", "lie"),
    ("tying", "tie"),
    ("idly", "idl"),
    ("gently", "gentl"),
    ("ugly", "ugli"),
    ("early", "earli"),
    ("only", "onli"),
    ("singly", "singl"),
    ("sky", "sky"),
    ("news", "news"),
    ("howe", "howe"),
    ("atlas", "atlas"),
    ("cosmos", "cosmos"),
    ("bias", "bias"),
    ("andes", "andes"),
];

/// Words left alone if they are the whole word after step 1a.
const EXCEPTIONS_POST_1A: [&str; 8] = [
    "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed",
];

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

fn contains_vowel(w: &[u8]) -> bool {
    w.iter().any(|&b| is_vowel(b))
}

fn ends_with(w: &[u8], suffix: &[u8]) -> bool {
    w.len() >= suffix.len() && &w[w.len() - suffix.len()..] == suffix
}

/// Short syllable: either non-vowel, vowel, non-vowel (not w/x/Y) at the end,
/// or the whole word is vowel followed by non-vowel.
fn ends_short_syllable(w: &[u8]) -> bool {
    let n = w.len();
    if n >= 3 {
        let (a, b, c) = (w[n - 3], w[n - 2], w[n - 1]);
        if !is_vowel(a) && is_vowel(b) && !is_vowel(c) && !matches!(c, b'w' | b'x' | b'Y') {
            return true;
        }
    }
    n == 2 && is_vowel(w[0]) && !is_vowel(w[1])
}

struct Regions {
    r1: usize,
    r2: usize,
}

fn compute_regions(w: &[u8]) -> Regions {
    let r1 = if w.starts_with(b"gener") || w.starts_with(b"arsen") {
        5
    } else if w.starts_with(b"commun") {
        6
    } else {
        region_after_vc(w, 0)
    };
    let r2 = region_after_vc(w, r1);
    Regions { r1, r2 }
}

/// Position after the first non-vowel that follows a vowel, scanning from `from`.
fn region_after_vc(w: &[u8], from: usize) -> usize {
    let mut i = from;
    while i < w.len() && !is_vowel(w[i]) {
        i += 1;
    }
    while i < w.len() && is_vowel(w[i]) {
        i += 1;
    }
    if i < w.len() {
        i + 1
    } else {
        w.len()
    }
}

/// Stem one lowercased token with the Porter2 rules.
pub fn stem(token: &str) -> String {
    let mut w: Vec<u8> = token.bytes().collect();
    if w.first() == Some(&b'\'') {
        w.remove(0);
    }
    if w.len() <= 2 {
        return String::from_utf8(w).unwrap_or_else(|_| token.to_string());
    }
    if let Some(&(_, out)) = EXCEPTIONS
        .iter()
        .find(|(word, _)| word.as_bytes() == w.as_slice())
    {
        return out.to_string();
    }

    // Mark consonant-y as 'Y' so it is not treated as a vowel below.
    if w[0] == b'y' {
        w[0] = b'Y';
    }
    for i in 1..w.len() {
        if w[i] == b'y' && is_vowel(w[i - 1]) {
            w[i] = b'Y';
        }
    }

    let regions = compute_regions(&w);
    let r1 = regions.r1;
    let r2 = regions.r2;
    let in_r1 = |w: &[u8], suffix_len: usize| w.len() >= suffix_len && w.len() - suffix_len >= r1;
    let in_r2 = |w: &[u8], suffix_len: usize| w.len() >= suffix_len && w.len() - suffix_len >= r2;

    // Step 0: apostrophe suffixes.
    for suffix in [b"'s'".as_slice(), b"'s", b"'"] {
        if ends_with(&w, suffix) {
            w.truncate(w.len() - suffix.len());
            break;
        }
    }

    // Step 1a.
    if ends_with(&w, b"sses") {
        w.truncate(w.len() - 2);
    } else if ends_with(&w, b"ied") || ends_with(&w, b"ies") {
        let keep = if w.len() > 4 { 1 } else { 2 };
        w.truncate(w.len() - 3 + keep);
        if keep == 1 {
            let n = w.len();
            w[n - 1] = b'i';
        } else {
            let n = w.len();
            w[n - 2] = b'i';
            w[n - 1] = b'e';
        }
    } else if ends_with(&w, b"us") || ends_with(&w, b"ss") {
        // leave alone
    } else if ends_with(&w, b"s") && w.len() >= 3 && contains_vowel(&w[..w.len() - 2]) {
        w.truncate(w.len() - 1);
    }

    if EXCEPTIONS_POST_1A
        .iter()
        .any(|word| word.as_bytes() == w.as_slice())
    {
        return String::from_utf8(w).expect("ascii");
    }

    // Step 1b.
    let mut matched_1b = None;
    for suffix in [
        b"eedly".as_slice(),
        b"ingly",
        b"edly",
        b"eed",
        b"ing",
        b"ed",
    ] {
        if ends_with(&w, suffix) {
            matched_1b = Some(suffix);
            break;
        }
    }
    if let Some(suffix) = matched_1b {
        if suffix == b"eed" || suffix == b"eedly" {
            if in_r1(&w, suffix.len()) {
                w.truncate(w.len() - suffix.len());
                w.extend_from_slice(b"ee");
            }
        } else if contains_vowel(&w[..w.len() - suffix.len()]) {
            w.truncate(w.len() - suffix.len());
            if ends_with(&w, b"at") || ends_with(&w, b"bl") || ends_with(&w, b"iz") {
                w.push(b'e');
            } else if DOUBLES.iter().any(|d| ends_with(&w, d)) {
                w.truncate(w.len() - 1);
            } else if r1 >= w.len() && ends_short_syllable(&w) {
                w.push(b'e');
            }
        }
    }

    // Step 1c: y -> i after a non-vowel that is not the first letter.
    let n = w.len();
    if n > 2 && matches!(w[n - 1], b'y' | b'Y') && !is_vowel(w[n - 2]) {
        w[n - 1] = b'i';
    }

    // Step 2: longest suffix first, applied only inside R1.
    const STEP2: [(&[u8], &[u8]); 24] = [
        (b"ational", b"ate"),
        (b"ization", b"ize"),
        (b"fulness", b"ful"),
        (b"ousness", b"ous"),
        (b"iveness", b"ive"),
        (b"tional", b"tion"),
        (b"biliti", b"ble"),
        (b"lessli", b"less"),
        (b"entli", b"ent"),
        (b"aliti", b"al"),
        (b"alism", b"al"),
        (b"ousli", b"ous"),
        (b"iviti", b"ive"),
        (b"fulli", b"ful"),
        (b"ation", b"ate"),
        (b"enci", b"ence"),
        (b"anci", b"ance"),
        (b"abli", b"able"),
        (b"izer", b"ize"),
        (b"ator", b"ate"),
        (b"alli", b"al"),
        (b"bli", b"ble"),
        (b"ogi", b"og"),
        (b"li", b""),
    ];
    for (suffix, replacement) in STEP2 {
        if ends_with(&w, suffix) {
            if in_r1(&w, suffix.len()) {
                let ok = match suffix {
                    b"ogi" => w.len() > 3 && w[w.len() - 4] == b'l',
                    b"li" => {
                        w.len() > 2
                            && matches!(
                                w[w.len() - 3],
                                b'c' | b'd' | b'e' | b'g' | b'h' | b'k' | b'm' | b'n' | b'r' | b't'
                            )
                    }
                    _ => true,
                };
                if ok {
                    w.truncate(w.len() - suffix.len());
                    w.extend_from_slice(replacement);
                }
            }
            break;
        }
    }

    // Step 3.
    const STEP3: [(&[u8], &[u8]); 9] = [
        (b"ational", b"ate"),
        (b"tional", b"tion"),
        (b"alize", b"al"),
        (b"icate", b"ic"),
        (b"iciti", b"ic"),
        (b"ative", b""),
        (b"ical", b"ic"),
        (b"ness", b""),
        (b"ful", b""),
    ];
    for (suffix, replacement) in STEP3 {
        if ends_with(&w, suffix) {
            if in_r1(&w, suffix.len()) {
                let ok = suffix != b"ative" || in_r2(&w, suffix.len());
                if ok {
                    w.truncate(w.len() - suffix.len());
                    w.extend_from_slice(replacement);
                }
            }
            break;
        }
    }

    // Step 4: deletions inside R2.
    const STEP4: [&[u8]; 18] = [
        b"ement", b"ance", b"ence", b"able", b"ible", b"ment", b"ant", b"ent", b"ism", b"ate",
        b"iti", b"ous", b"ive", b"ize", b"ion", b"al", b"er", b"ic",
    ];
    for suffix in STEP4 {
        if ends_with(&w, suffix) {
            if in_r2(&w, suffix.len()) {
                let ok = suffix != b"ion"
                    || (w.len() > 3 && matches!(w[w.len() - 4], b's' | b't'));
                if ok {
                    w.truncate(w.len() - suffix.len());
                }
            }
            break;
        }
    }

    // Step 5.
    let n = w.len();
    if n > 0 && w[n - 1] == b'e' {
        let delete = n >= r2 + 1 || (n >= r1 + 1 && !ends_short_syllable(&w[..n - 1]));
        if delete {
            w.truncate(n - 1);
        }
    } else if n > 1 && w[n - 1] == b'l' && w[n - 2] == b'l' && n >= r2 + 1 {
        w.truncate(n - 1);
    }

    for b in &mut w {
        if *b == b'Y' {
            *b = b'y';
        }
    }
    String::from_utf8(w).unwrap_or_else(|_| token.to_string())
}
