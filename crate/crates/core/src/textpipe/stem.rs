//! Snowball English ("Porter2") stemmer.
//!
//! Follows the current Snowball `english.sbl` algorithm, including the
//! irregular-form exceptions and the `eed`/`ing` special cases in step 1b.
//! Input is expected to be lowercase. A hyphenated token is one word whose
//! hyphens count as non-vowels, so `fibre-bundle` becomes `fibre-bundl`
//! while `fibre` alone becomes `fibr`.

/// Stems a lowercased token.
pub fn stem(token: &str) -> String {
    stem_word(token)
}

/// Stems a single lowercased word.
pub fn stem_word(word: &str) -> String {
    if let Some(fixed) = exception(word) {
        return fixed.to_string();
    }
    if word.chars().count() < 3 {
        return word.to_string();
    }

    let mut w: Vec<char> = word.chars().collect();
    if w.first() == Some(&'\'') {
        w.remove(0);
    }
    let mut y_found = false;
    if w.first() == Some(&'y') {
        w[0] = 'Y';
        y_found = true;
    }
    for i in 1..w.len() {
        if w[i] == 'y' && is_vowel(w[i - 1]) {
            w[i] = 'Y';
            y_found = true;
        }
    }

    let (p1, p2) = mark_regions(&w);
    let mut s = Word { w, p1, p2 };
    s.step_1a();
    s.step_1b();
    s.step_1c();
    s.step_2();
    s.step_3();
    s.step_4();
    s.step_5();

    let mut out: String = s.w.into_iter().collect();
    if y_found {
        out = out.replace('Y', "y");
    }
    out
}

fn exception(word: &str) -> Option<&'static str> {
    Some(match word {
        "skis" => "ski",
        "skies" => "sky",
        "idly" => "idl",
        "gently" => "gentl",
        "ugly" => "ugli",
        "early" => "earli",
        "only" => "onli",
        "singly" => "singl",
        "andes" => "andes",
        "atlas" => "atlas",
        "bias" => "bias",
        "cosmos" => "cosmos",
        "howe" => "howe",
        "news" => "news",
        "sky" => "sky",
        _ => return None,
    })
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn is_vowel_wxy(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y' | 'w' | 'x' | 'Y')
}

fn is_valid_li(c: char) -> bool {
    matches!(c, 'c' | 'd' | 'e' | 'g' | 'h' | 'k' | 'm' | 'n' | 'r' | 't')
}

// Affixes are ASCII, so byte length equals char length.
fn starts_with(w: &[char], prefix: &str) -> bool {
    w.len() >= prefix.len() && w.iter().zip(prefix.chars()).all(|(a, b)| *a == b)
}

fn ends_with(w: &[char], suffix: &str) -> bool {
    w.len() >= suffix.len() && w[w.len() - suffix.len()..].iter().copied().eq(suffix.chars())
}

fn equals(w: &[char], s: &str) -> bool {
    w.iter().copied().eq(s.chars())
}

/// Position just after the first non-vowel that follows a vowel, searching
/// from `from`.
fn after_vowel_consonant(w: &[char], from: usize) -> Option<usize> {
    let v = (from..w.len()).find(|&i| is_vowel(w[i]))?;
    let c = (v + 1..w.len()).find(|&i| !is_vowel(w[i]))?;
    Some(c + 1)
}

fn mark_regions(w: &[char]) -> (usize, usize) {
    const PREFIXES: [&str; 9] = [
        "arsen", "commun", "emerg", "gener", "inter", "later", "organ", "past", "univers",
    ];
    let n = w.len();
    let p1 = match PREFIXES.iter().filter(|p| starts_with(w, p)).map(|p| p.len()).max() {
        Some(len) => len,
        None => match after_vowel_consonant(w, 0) {
            Some(p) => p,
            None => return (n, n),
        },
    };
    let p2 = after_vowel_consonant(w, p1).unwrap_or(n);
    (p1, p2)
}

/// Whether `w[..end]` ends in a short syllable.
fn short_syllable(w: &[char], end: usize) -> bool {
    let w = &w[..end];
    let n = w.len();
    if n >= 3 && !is_vowel_wxy(w[n - 1]) && is_vowel(w[n - 2]) && !is_vowel(w[n - 3]) {
        return true;
    }
    if n == 2 && !is_vowel(w[1]) && is_vowel(w[0]) {
        return true;
    }
    ends_with(w, "past")
}

#[derive(Clone, Copy)]
enum Rule {
    To(&'static str),
    /// `ogi` -> `og` when preceded by `l`.
    OgiAfterL,
    /// delete `li` when preceded by a valid li-ending.
    LiAfterValid,
    /// delete only inside R2.
    DeleteInR2,
    /// delete `ion` when preceded by `s` or `t`.
    IonAfterST,
}

struct Word {
    w: Vec<char>,
    p1: usize,
    p2: usize,
}

impl Word {
    fn longest<'a>(&self, table: &'a [(&'a str, Rule)]) -> Option<(usize, Rule)> {
        table
            .iter()
            .filter(|(suffix, _)| ends_with(&self.w, suffix))
            .max_by_key(|(suffix, _)| suffix.chars().count())
            .map(|(suffix, rule)| (self.w.len() - suffix.chars().count(), *rule))
    }

    fn replace_from(&mut self, start: usize, with: &str) {
        self.w.truncate(start);
        self.w.extend(with.chars());
    }

    fn step_1a(&mut self) {
        for suffix in ["'s'", "'s", "'"] {
            if ends_with(&self.w, suffix) {
                let n = self.w.len() - suffix.chars().count();
                self.w.truncate(n);
                break;
            }
        }

        let n = self.w.len();
        if ends_with(&self.w, "sses") {
            self.replace_from(n - 4, "ss");
        } else if ends_with(&self.w, "ied") || ends_with(&self.w, "ies") {
            let start = n - 3;
            self.replace_from(start, if start >= 2 { "i" } else { "ie" });
        } else if ends_with(&self.w, "ss") || ends_with(&self.w, "us") {
        } else if ends_with(&self.w, "s") {
            let start = n - 1;
            if start >= 1 && self.w[..start - 1].iter().any(|&c| is_vowel(c)) {
                self.w.truncate(start);
            }
        }
    }

    fn step_1b(&mut self) {
        const TABLE: [(&str, u8); 6] = [
            ("eedly", 1),
            ("ingly", 2),
            ("edly", 2),
            ("eed", 1),
            ("ing", 3),
            ("ed", 2),
        ];
        let Some((suffix, kind)) = TABLE.iter().find(|(s, _)| ends_with(&self.w, s)) else {
            return;
        };
        let start = self.w.len() - suffix.len();

        match kind {
            1 => {
                let prefix = &self.w[..start];
                if start >= self.p1 && !["succ", "proc", "exc"].iter().any(|p| equals(prefix, p)) {
                    self.replace_from(start, "ee");
                }
                return;
            }
            3 => {
                let prefix = &self.w[..start];
                if ends_with(prefix, "y") {
                    if prefix.len() == 2 && !is_vowel(prefix[0]) {
                        self.replace_from(start - 1, "ie");
                        return;
                    }
                } else if ["even", "cann", "inn", "earr", "herr", "out"]
                    .iter()
                    .any(|p| equals(prefix, p))
                {
                    return;
                }
            }
            _ => {}
        }

        if !self.w[..start].iter().any(|&c| is_vowel(c)) {
            return;
        }
        self.w.truncate(start);

        if ["at", "bl", "iz"].iter().any(|s| ends_with(&self.w, s)) {
            self.w.push('e');
            return;
        }
        let n = self.w.len();
        let doubled = ["bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"]
            .iter()
            .any(|s| ends_with(&self.w, s));
        if doubled {
            if n == 3 && matches!(self.w[0], 'a' | 'e' | 'o') {
                return;
            }
            self.w.pop();
            return;
        }
        if n == self.p1 && short_syllable(&self.w, n) {
            self.w.push('e');
        }
    }

    fn step_1c(&mut self) {
        let n = self.w.len();
        if n >= 3 && matches!(self.w[n - 1], 'y' | 'Y') && !is_vowel(self.w[n - 2]) {
            self.w[n - 1] = 'i';
        }
    }

    fn step_2(&mut self) {
        use Rule::*;
        const TABLE: [(&str, Rule); 25] = [
            ("anci", To("ance")),
            ("enci", To("ence")),
            ("ogi", OgiAfterL),
            ("li", LiAfterValid),
            ("bli", To("ble")),
            ("abli", To("able")),
            ("alli", To("al")),
            ("fulli", To("ful")),
            ("lessli", To("less")),
            ("ousli", To("ous")),
            ("entli", To("ent")),
            ("aliti", To("al")),
            ("biliti", To("ble")),
            ("iviti", To("ive")),
            ("tional", To("tion")),
            ("ational", To("ate")),
            ("alism", To("al")),
            ("ation", To("ate")),
            ("ization", To("ize")),
            ("izer", To("ize")),
            ("ator", To("ate")),
            ("iveness", To("ive")),
            ("fulness", To("ful")),
            ("ousness", To("ous")),
            ("ogist", To("og")),
        ];
        let Some((start, rule)) = self.longest(&TABLE) else {
            return;
        };
        if start < self.p1 {
            return;
        }
        match rule {
            To(s) => self.replace_from(start, s),
            OgiAfterL => {
                if start > 0 && self.w[start - 1] == 'l' {
                    self.replace_from(start, "og");
                }
            }
            LiAfterValid => {
                if start > 0 && is_valid_li(self.w[start - 1]) {
                    self.w.truncate(start);
                }
            }
            DeleteInR2 | IonAfterST => unreachable!(),
        }
    }

    fn step_3(&mut self) {
        use Rule::*;
        const TABLE: [(&str, Rule); 9] = [
            ("icate", To("ic")),
            ("ative", DeleteInR2),
            ("alize", To("al")),
            ("iciti", To("ic")),
            ("ical", To("ic")),
            ("tional", To("tion")),
            ("ational", To("ate")),
            ("ful", To("")),
            ("ness", To("")),
        ];
        let Some((start, rule)) = self.longest(&TABLE) else {
            return;
        };
        if start < self.p1 {
            return;
        }
        match rule {
            To(s) => self.replace_from(start, s),
            DeleteInR2 => {
                if start >= self.p2 {
                    self.w.truncate(start);
                }
            }
            _ => unreachable!(),
        }
    }

    fn step_4(&mut self) {
        use Rule::*;
        const D: Rule = To("");
        const TABLE: [(&str, Rule); 18] = [
            ("ic", D),
            ("ance", D),
            ("ence", D),
            ("able", D),
            ("ible", D),
            ("ate", D),
            ("ive", D),
            ("ize", D),
            ("iti", D),
            ("al", D),
            ("ism", D),
            ("ion", IonAfterST),
            ("er", D),
            ("ous", D),
            ("ant", D),
            ("ent", D),
            ("ment", D),
            ("ement", D),
        ];
        let Some((start, rule)) = self.longest(&TABLE) else {
            return;
        };
        if start < self.p2 {
            return;
        }
        match rule {
            IonAfterST => {
                if start > 0 && matches!(self.w[start - 1], 's' | 't') {
                    self.w.truncate(start);
                }
            }
            _ => self.w.truncate(start),
        }
    }

    fn step_5(&mut self) {
        let n = self.w.len();
        match self.w.last() {
            Some('e') => {
                let start = n - 1;
                if start >= self.p2 || (start >= self.p1 && !short_syllable(&self.w, start)) {
                    self.w.truncate(start);
                }
            }
            Some('l') => {
                let start = n - 1;
                if start >= self.p2 && start > 0 && self.w[start - 1] == 'l' {
                    self.w.truncate(start);
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_forms() {
        assert_eq!(stem("earthquakes"), "earthquak");
        assert_eq!(stem("lurr"), "lurr");
        assert_eq!(stem("fibre-bundle"), "fibre-bundl");
        assert_eq!(stem("fibre"), "fibr");
        assert_eq!(stem("accelerating"), "acceler");
        assert_eq!(stem("acceleration"), "acceler");
        assert_eq!(stem("criticality"), "critic");
    }

    #[test]
    fn exceptions_and_short_words() {
        assert_eq!(stem("skies"), "sky");
        assert_eq!(stem("news"), "news");
        assert_eq!(stem("by"), "by");
        assert_eq!(stem("dying"), "die");
        assert_eq!(stem("inning"), "inning");
        assert_eq!(stem("succeed"), "succeed");
        assert_eq!(stem("agreed"), "agre");
    }

    #[test]
    fn y_handling() {
        assert_eq!(stem("cry"), "cri");
        assert_eq!(stem("say"), "say");
        assert_eq!(stem("youth"), "youth");
        assert_eq!(stem("flying"), "fli");
    }
}
