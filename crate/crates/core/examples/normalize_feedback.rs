//! Cleaning and metadata canonicalization applied to every submission.

use std::collections::BTreeMap;

use consultrag::ingest::language::detect_language;
use consultrag::ingest::normalize::{canonical_country, clean_text, parse_timestamp};
use consultrag::ingest::{normalize, InitiativeMeta, RawSubmission, StakeholderGroup};

fn main() {
    for text in [
        "Minimum tax rates on heating fuels should be indexed to inflation.",
        "Die Mindeststeuersätze für Heizstoffe sollten an die Inflation gekoppelt werden.",
        "Les emballages réutilisables doivent devenir la norme dans la restauration.",
        "Los sistemas de IA de alto riesgo necesitan una supervisión humana real.",
        "qzx wvbn plkk",
    ] {
        println!("{:>7}  {text}", detect_language(text));
    }
    println!();

    println!("{:?}", clean_text("<p>Reusable&nbsp;packaging <b>now</b>!</p>\n\n<p>Thanks.</p>"));
    for c in ["DEU", "fr", "Slovakia", "EL", "Atlantis"] {
        println!("country {c:>9} -> {:?}", canonical_country(c));
    }
    for d in ["2023/03/01 10:22:11", "2023-03-01T10:22:11Z", "01.03.2023", "yesterday"] {
        println!("date {d:>20} -> {:?}", parse_timestamp(d));
    }
    for u in ["EU_CITIZEN", "NGO", "Company/business organisation", "Consultancy"] {
        println!("user type {u:>30} -> {}", StakeholderGroup::from_declared(u));
    }
    println!();

    let raw = RawSubmission {
        source_id: "4401187".into(),
        initiative_id: "PI-2023-CBM".into(),
        payload: "<p>The reporting template is too detailed for small importers.</p>".into(),
        declared_metadata: BTreeMap::from([
            ("user_type".to_string(), "COMPANY".to_string()),
            ("organization".to_string(), "Nordhafen Metallhandel GmbH".to_string()),
            ("country".to_string(), "DEU".to_string()),
            ("date".to_string(), "2023/03/01 10:22:11".to_string()),
        ]),
    };
    let meta = InitiativeMeta {
        initiative_id: "PI-2023-CBM".into(),
        title: "Carbon border adjustment: reporting obligations".into(),
        topic: "climate".into(),
    };
    let record = normalize(&raw, &meta).expect("valid submission");
    println!("{}", serde_json::to_string_pretty(&record).unwrap());
}
