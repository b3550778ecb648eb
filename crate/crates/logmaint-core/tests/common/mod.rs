//! Independent oracles shared by the property and acceptance suites. These
//! deliberately avoid the library's code paths: the edit distance is the
//! textbook recurrence over a full table, Jaro follows the definition with
//! explicit match lists, cosine is a naive loop.

/// Full-table Wagner-Fischer straight from the recurrence.
pub fn levenshtein_oracle(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        table[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            table[i][j] = (table[i - 1][j] + 1)
                .min(table[i][j - 1] + 1)
                .min(table[i - 1][j - 1] + cost);
        }
    }
    table[a.len()][b.len()]
}

/// Jaro per the definition: collect matched characters of both strings in
/// order, then count positions where the sequences disagree.
pub fn jaro_oracle(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut b_used = vec![false; b.len()];
    let mut a_matches: Vec<char> = Vec::new();
    let mut b_match_positions: Vec<usize> = Vec::new();
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        for j in lo..hi {
            if !b_used[j] && b[j] == ca {
                b_used[j] = true;
                a_matches.push(ca);
                b_match_positions.push(j);
                break;
            }
        }
    }
    if a_matches.is_empty() {
        return 0.0;
    }
    let mut b_matches: Vec<(usize, char)> = b_match_positions
        .iter()
        .map(|&j| (j, b[j]))
        .collect();
    b_matches.sort_unstable_by_key(|&(j, _)| j);
    let out_of_order = a_matches
        .iter()
        .zip(b_matches.iter())
        .filter(|(ca, (_, cb))| *ca != cb)
        .count();
    let m = a_matches.len() as f64;
    let t = (out_of_order / 2) as f64;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

pub fn cosine_oracle(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for i in 0..a.len() {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

/// Deterministic xorshift for test data that must not depend on proptest.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
