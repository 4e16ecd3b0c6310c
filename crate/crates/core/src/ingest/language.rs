//! Language tagging for the 24 official EU languages.
//!
//! Greek and Bulgarian are decided by script. Latin-script text is scored
//! against per-language profiles of high-frequency function words plus
//! letters that only occur in one or two of the languages. The highest
//! score wins; a tie or a score below [`MIN_SCORE`] yields `"unknown"`.

use std::collections::HashSet;
use std::sync::OnceLock;

pub const UNKNOWN: &str = "unknown";

/// Texts shorter than this (in characters, after trimming) are not detected.
pub const MIN_DETECT_CHARS: usize = 20;

const MIN_SCORE: u32 = 2;

pub const EU_LANGUAGES: [&str; 24] = [
    "bg", "cs", "da", "de", "el", "en", "es", "et", "fi", "fr", "ga", "hr", "hu", "it", "lt", "lv", "mt", "nl", "pl",
    "pt", "ro", "sk", "sl", "sv",
];

pub fn is_eu_language(code: &str) -> bool {
    EU_LANGUAGES.contains(&code)
}

/// Lowercases and validates a declared language code. Returns `None` for
/// anything outside the EU set.
pub fn canonical_language(code: &str) -> Option<&'static str> {
    let lower = code.trim().to_ascii_lowercase();
    EU_LANGUAGES.iter().copied().find(|c| *c == lower)
}

struct Profile {
    code: &'static str,
    words: &'static [&'static str],
    letters: &'static [char],
}

const PROFILES: &[Profile] = &[
    Profile {
        code: "cs",
        words: &[
            "je",
            "pro",
            "nás",
            "všechny",
            "a",
            "také",
            "naše",
            "na",
            "se",
            "že",
            "to",
            "ale",
            "jsou",
            "by",
            "jako",
            "který",
            "které",
            "být",
            "není",
            "jen",
            "už",
            "při",
            "nebo",
            "proto",
            "však",
            "tak",
            "děti",
            "důležitá",
            "důležité",
            "velmi",
            "musí",
        ],
        letters: &['ě', 'ř', 'ů'],
    },
    Profile {
        code: "da",
        words: &[
            "er", "og", "det", "for", "os", "alle", "at", "ikke", "med", "skal", "være", "til", "en", "af", "som",
            "på", "vi", "har", "den", "vigtig", "meget", "også", "vores", "bør", "kan", "mere",
        ],
        letters: &['ø', 'æ'],
    },
    Profile {
        code: "de",
        words: &[
            "die", "der", "das", "und", "ist", "für", "uns", "nicht", "mit", "auf", "auch", "sich", "ein", "eine",
            "wir", "zu", "von", "dem", "es", "werden", "wichtig", "alle", "sehr", "sind", "muss", "sollte", "unsere",
            "wird", "den", "des", "im", "in", "zu", "bei", "nach", "aus", "oder", "aber", "wenn", "ich", "sie", "ihre",
            "seine", "sollten", "können", "kann", "haben", "hat", "noch", "mehr", "nur", "sonst", "trotz", "weiter",
            "dürfen",
        ],
        letters: &['ß'],
    },
    Profile {
        code: "en",
        words: &[
            "the",
            "is",
            "and",
            "for",
            "of",
            "to",
            "in",
            "it",
            "that",
            "we",
            "our",
            "are",
            "not",
            "with",
            "this",
            "be",
            "all",
            "us",
            "on",
            "should",
            "would",
            "very",
            "important",
            "have",
            "must",
            "will",
            "more",
            "they",
            "a",
            "an",
            "as",
            "i",
            "am",
            "by",
            "from",
            "at",
            "or",
            "can",
            "could",
            "need",
            "when",
            "their",
            "there",
            "than",
            "too",
            "out",
            "which",
            "been",
            "has",
            "into",
            "also",
            "these",
            "if",
            "so",
            "what",
            "about",
            "people",
            "despite",
            "other",
            "otherwise",
            "without",
        ],
        letters: &[],
    },
    Profile {
        code: "es",
        words: &[
            "la",
            "el",
            "es",
            "muy",
            "para",
            "todos",
            "nosotros",
            "y",
            "los",
            "las",
            "que",
            "en",
            "por",
            "una",
            "con",
            "no",
            "del",
            "se",
            "futuro",
            "más",
            "pero",
            "está",
            "son",
            "debe",
            "nuestros",
            "nuestra",
            "de",
            "un",
            "lo",
            "al",
            "como",
            "su",
            "sus",
            "sobre",
            "entre",
            "hemos",
            "somos",
            "deberían",
            "debería",
            "también",
            "este",
            "esta",
            "hay",
            "ya",
            "porque",
            "cuando",
            "ser",
            "menos",
            "otro",
            "sin",
            "desde",
            "deben",
        ],
        letters: &['ñ', '¿', '¡'],
    },
    Profile {
        code: "et",
        words: &[
            "on", "meile", "kõigile", "väga", "oluline", "ja", "see", "peab", "olema", "ei", "et", "kui", "aga", "ka",
            "mis", "ning", "oma", "siis", "või", "nende", "meie", "tuleb",
        ],
        letters: &['õ'],
    },
    Profile {
        code: "fi",
        words: &[
            "on", "meille", "kaikille", "ja", "sen", "pitää", "olla", "ei", "se", "että", "tämä", "mutta", "myös",
            "kuin", "hyvin", "tärkeä", "niin", "ovat", "oli", "voi", "meidän", "täytyy",
        ],
        letters: &[],
    },
    Profile {
        code: "fr",
        words: &[
            "la",
            "le",
            "les",
            "est",
            "et",
            "pour",
            "nous",
            "tous",
            "des",
            "une",
            "un",
            "du",
            "de",
            "que",
            "qui",
            "pas",
            "sur",
            "dans",
            "nos",
            "ce",
            "il",
            "sont",
            "très",
            "être",
            "enfants",
            "doit",
            "notre",
            "aux",
            "en",
            "au",
            "ne",
            "plus",
            "avec",
            "mais",
            "ou",
            "leur",
            "leurs",
            "ses",
            "son",
            "sa",
            "je",
            "elles",
            "ils",
            "devrait",
            "devraient",
            "sont",
            "trop",
            "sinon",
            "aussi",
            "cette",
            "nous",
            "vous",
            "ont",
        ],
        letters: &['ê', 'œ', 'ç'],
    },
    Profile {
        code: "ga",
        words: &[
            "tá",
            "an",
            "go",
            "léir",
            "agus",
            "do",
            "na",
            "ar",
            "ag",
            "sé",
            "sí",
            "le",
            "níl",
            "atá",
            "mar",
            "ach",
            "seo",
            "sin",
            "dúinn",
            "tábhachtach",
            "páistí",
            "fuinnimh",
            "ní",
            "bhfuil",
            "dá",
            "ár",
        ],
        letters: &[],
    },
    Profile {
        code: "hr",
        words: &[
            "je",
            "za",
            "sve",
            "nas",
            "i",
            "budućnost",
            "naše",
            "djece",
            "su",
            "se",
            "da",
            "ne",
            "ali",
            "koji",
            "što",
            "ili",
            "vrlo",
            "kako",
            "biti",
            "također",
            "jer",
            "samo",
            "važna",
            "treba",
            "mora",
        ],
        letters: &['đ', 'ć'],
    },
    Profile {
        code: "hu",
        words: &[
            "az",
            "a",
            "nagyon",
            "fontos",
            "és",
            "is",
            "számára",
            "hogy",
            "nem",
            "egy",
            "van",
            "meg",
            "csak",
            "mint",
            "vagy",
            "kell",
            "már",
            "ez",
            "azt",
            "mindannyiunk",
            "minden",
            "kellene",
        ],
        letters: &['ő', 'ű'],
    },
    Profile {
        code: "it",
        words: &[
            "la",
            "il",
            "è",
            "molto",
            "per",
            "tutti",
            "noi",
            "e",
            "i",
            "nostri",
            "che",
            "di",
            "del",
            "della",
            "non",
            "sono",
            "un",
            "una",
            "con",
            "anche",
            "gli",
            "le",
            "questo",
            "ma",
            "figli",
            "deve",
            "nostra",
            "in",
            "al",
            "alla",
            "dei",
            "delle",
            "nel",
            "nella",
            "come",
            "più",
            "sia",
            "hanno",
            "dovrebbe",
            "dovrebbero",
            "essere",
            "perché",
            "quando",
            "anche",
            "loro",
            "questa",
            "ci",
        ],
        letters: &[],
    },
    Profile {
        code: "lt",
        words: &[
            "yra", "labai", "svarbi", "mums", "visiems", "ir", "mūsų", "vaikams", "kad", "kaip", "ne", "su", "bet",
            "taip", "pat", "tai", "arba", "šis", "turi", "būti", "jų", "svarbu",
        ],
        letters: &['ė', 'į', 'ų'],
    },
    Profile {
        code: "lv",
        words: &[
            "ir", "ļoti", "svarīga", "mums", "visiem", "un", "mūsu", "bērniem", "ka", "kas", "nav", "ar", "par", "no",
            "uz", "arī", "bet", "vai", "tas", "šī", "jābūt", "svarīgi",
        ],
        letters: &['ā', 'ē', 'ī', 'ģ', 'ķ', 'ļ', 'ņ'],
    },
    Profile {
        code: "mt",
        words: &[
            "il",
            "hija",
            "importanti",
            "ħafna",
            "għalina",
            "lkoll",
            "u",
            "tagħna",
            "li",
            "ta",
            "fil",
            "mhux",
            "huwa",
            "dan",
            "din",
            "għal",
            "biex",
            "jew",
            "kien",
            "anki",
            "minn",
            "fuq",
            "għandu",
        ],
        letters: &['ħ', 'ġ', 'ċ'],
    },
    Profile {
        code: "nl",
        words: &[
            "de",
            "het",
            "een",
            "is",
            "en",
            "voor",
            "ons",
            "van",
            "dat",
            "niet",
            "zijn",
            "met",
            "op",
            "te",
            "ook",
            "maar",
            "wij",
            "we",
            "belangrijk",
            "allemaal",
            "onze",
            "kinderen",
            "worden",
            "moet",
            "deze",
            "in",
            "aan",
            "bij",
            "als",
            "dan",
            "er",
            "door",
            "naar",
            "om",
            "zou",
            "moeten",
            "kan",
            "hebben",
            "heeft",
            "wordt",
            "nog",
            "meer",
            "al",
            "ze",
            "hun",
        ],
        letters: &['ĳ'],
    },
    Profile {
        code: "pl",
        words: &[
            "jest",
            "bardzo",
            "dla",
            "nas",
            "wszystkich",
            "i",
            "naszych",
            "dzieci",
            "nie",
            "się",
            "że",
            "to",
            "na",
            "w",
            "z",
            "do",
            "są",
            "ale",
            "który",
            "oraz",
            "także",
            "być",
            "jak",
            "tylko",
            "ważna",
            "powinna",
        ],
        letters: &['ł', 'ś', 'ź', 'ń'],
    },
    Profile {
        code: "pt",
        words: &[
            "a", "o", "é", "muito", "para", "todos", "nós", "e", "os", "nossos", "que", "do", "da", "não", "são", "um",
            "uma", "com", "também", "mas", "em", "filhos", "mais", "as", "deve", "no", "na", "dos", "das", "como",
            "mas", "seu", "sua", "pelo", "pela", "isso", "está", "têm", "deveria", "devem", "quando", "porque", "ser",
            "ao", "aos",
        ],
        letters: &['ã'],
    },
    Profile {
        code: "ro",
        words: &[
            "este",
            "foarte",
            "pentru",
            "noi",
            "toți",
            "și",
            "copiii",
            "noștri",
            "că",
            "de",
            "la",
            "în",
            "nu",
            "care",
            "sunt",
            "cu",
            "mai",
            "dar",
            "acest",
            "fi",
            "trebuie",
            "să",
            "importantă",
        ],
        letters: &['ș', 'ț', 'ă', 'ş', 'ţ'],
    },
    Profile {
        code: "sk",
        words: &[
            "je",
            "a",
            "nás",
            "naše",
            "pre",
            "veľmi",
            "dôležitá",
            "všetkých",
            "deti",
            "sa",
            "že",
            "aj",
            "ktorý",
            "ako",
            "nie",
            "som",
            "tiež",
            "alebo",
            "preto",
            "však",
            "musí",
        ],
        letters: &['ľ', 'ô', 'ŕ', 'ĺ'],
    },
    Profile {
        code: "sl",
        words: &[
            "je",
            "zelo",
            "za",
            "vse",
            "nas",
            "in",
            "našo",
            "prihodnost",
            "so",
            "se",
            "da",
            "ne",
            "ki",
            "kaj",
            "ali",
            "tudi",
            "biti",
            "kot",
            "samo",
            "pomemben",
            "mora",
            "lahko",
        ],
        letters: &[],
    },
    Profile {
        code: "sv",
        words: &[
            "är", "och", "för", "oss", "alla", "att", "inte", "med", "ska", "vara", "till", "en", "av", "som", "på",
            "vi", "har", "den", "viktig", "mycket", "också", "våra", "barn", "måste", "bör",
        ],
        letters: &[],
    },
];

fn word_sets() -> &'static Vec<HashSet<&'static str>> {
    static SETS: OnceLock<Vec<HashSet<&'static str>>> = OnceLock::new();
    SETS.get_or_init(|| PROFILES.iter().map(|p| p.words.iter().copied().collect()).collect())
}

fn is_greek(c: char) -> bool {
    matches!(c, '\u{0370}'..='\u{03FF}' | '\u{1F00}'..='\u{1FFF}')
}

fn is_cyrillic(c: char) -> bool {
    matches!(c, '\u{0400}'..='\u{04FF}')
}

/// Detects the language of `text`. Deterministic.
pub fn detect_language(text: &str) -> &'static str {
    let trimmed = text.trim();
    if trimmed.chars().count() < MIN_DETECT_CHARS {
        return UNKNOWN;
    }
    let lower = trimmed.to_lowercase();

    let (mut letters, mut greek, mut cyrillic) = (0usize, 0usize, 0usize);
    for c in lower.chars().filter(|c| c.is_alphabetic()) {
        letters += 1;
        if is_greek(c) {
            greek += 1;
        } else if is_cyrillic(c) {
            cyrillic += 1;
        }
    }
    if letters == 0 {
        return UNKNOWN;
    }
    if greek * 2 > letters {
        return "el";
    }
    if cyrillic * 2 > letters {
        return "bg";
    }

    let tokens: Vec<&str> = lower.split(|c: char| !c.is_alphabetic()).filter(|t| !t.is_empty()).collect();
    let sets = word_sets();
    let mut best: Option<(&'static str, u32)> = None;
    let mut tied = false;
    for (profile, words) in PROFILES.iter().zip(sets) {
        let word_hits = tokens.iter().filter(|t| words.contains(*t)).count() as u32;
        let letter_hits = lower.chars().filter(|c| profile.letters.contains(c)).count() as u32;
        let score = word_hits + letter_hits;
        match best {
            Some((_, s)) if score == s => tied = true,
            Some((_, s)) if score < s => {}
            _ => {
                best = Some((profile.code, score));
                tied = false;
            }
        }
    }
    match best {
        Some((code, score)) if !tied && score >= MIN_SCORE => code,
        _ => UNKNOWN,
    }
}

/// Declared metadata wins over detection when it names an EU language.
pub fn resolve_language(declared: Option<&str>, text: &str) -> &'static str {
    declared.and_then(canonical_language).unwrap_or_else(|| detect_language(text))
}
