//! Formula syntax: the AST, its concrete text form, and language classification.

mod formula;
mod parser;
mod printer;

pub use formula::{classify_language, embed_ky, Formula, LanguageError, LanguageTag, Name, RESERVED_ATOM};
pub use parser::{parse_formula, ParseError};
pub use printer::print_formula;

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}
