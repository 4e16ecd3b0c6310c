//! Seeded generator for the committed fixture files.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const SEED: u64 = 20_240_917;

pub struct Initiative {
    pub id: &'static str,
    pub title: &'static str,
    pub topic: &'static str,
}

pub const INITIATIVES: [Initiative; 3] = [
    Initiative { id: "PI-2021-ETD", title: "Revision of the Energy Taxation Directive", topic: "energy" },
    Initiative {
        id: "PI-2021-AIA",
        title: "Artificial intelligence: ethical and legal requirements",
        topic: "digital",
    },
    Initiative { id: "PI-2022-PPW", title: "Packaging and packaging waste: review of the rules", topic: "environment" },
];

pub const LANGS: [&str; 4] = ["en", "de", "fr", "es"];

/// Claims and reasons per initiative (outer) and language (inner, LANGS order).
type Bank = [[&'static [&'static str]; 4]; 3];

pub const CLAIMS: Bank = [
    [
        &[
            "We support ending the tax exemption for aviation kerosene.",
            "Minimum tax rates on heating fuels should be indexed to inflation.",
            "Electricity used by heat pumps must be taxed less than natural gas.",
            "Taxing diesel more lightly than petrol is no longer justified.",
            "Energy-intensive industries need a transition period before higher rates apply.",
            "Revenue from energy taxes should fund insulation for low-income households.",
        ],
        &[
            "Wir unterstützen die Abschaffung der Steuerbefreiung für Kerosin im Luftverkehr.",
            "Die Mindeststeuersätze für Heizstoffe sollten an die Inflation gekoppelt werden.",
            "Strom für Wärmepumpen muss niedriger besteuert werden als Erdgas.",
            "Die geringere Besteuerung von Diesel gegenüber Benzin ist nicht mehr gerechtfertigt.",
            "Die energieintensive Industrie braucht eine Übergangsfrist vor höheren Steuersätzen.",
            "Die Einnahmen aus Energiesteuern sollten die Dämmung für Haushalte mit geringem Einkommen finanzieren.",
        ],
        &[
            "Nous soutenons la fin de l'exonération fiscale du kérosène pour l'aviation.",
            "Les taux minimaux sur les combustibles de chauffage devraient être indexés sur l'inflation.",
            "L'électricité des pompes à chaleur doit être moins taxée que le gaz naturel.",
            "Une taxation plus faible du diesel par rapport à l'essence n'est plus justifiée.",
            "Les industries à forte intensité énergétique ont besoin d'une période de transition avant des taux plus élevés.",
            "Les recettes des taxes sur l'énergie devraient financer l'isolation des ménages à faibles revenus.",
        ],
        &[
            "Apoyamos el fin de la exención fiscal del queroseno para la aviación.",
            "Los tipos mínimos sobre los combustibles de calefacción deberían indexarse a la inflación.",
            "La electricidad de las bombas de calor debe tributar menos que el gas natural.",
            "Ya no está justificado gravar el diésel menos que la gasolina.",
            "Las industrias de alto consumo energético necesitan un periodo de transición antes de tipos más altos.",
            "Los ingresos de los impuestos energéticos deberían financiar el aislamiento de los hogares con pocos ingresos.",
        ],
    ],
    [
        &[
            "Remote biometric identification in public spaces should be banned.",
            "Small companies need simpler conformity assessments for AI systems.",
            "High-risk AI systems must be registered in a public database.",
            "Developers of general purpose models should disclose their training data.",
            "Regulatory sandboxes would help start-ups test AI products safely.",
            "People must be told when they are interacting with a chatbot.",
        ],
        &[
            "Die biometrische Fernidentifizierung im öffentlichen Raum sollte verboten werden.",
            "Kleine Unternehmen brauchen einfachere Konformitätsbewertungen für KI-Systeme.",
            "Hochrisiko-KI-Systeme müssen in einer öffentlichen Datenbank registriert werden.",
            "Die Entwickler von Basismodellen sollten ihre Trainingsdaten offenlegen.",
            "Reallabore würden Start-ups helfen, KI-Produkte sicher zu testen.",
            "Menschen müssen erfahren, wenn sie mit einem Chatbot sprechen.",
        ],
        &[
            "L'identification biométrique à distance dans les espaces publics devrait être interdite.",
            "Les petites entreprises ont besoin d'évaluations de conformité plus simples pour les systèmes d'IA.",
            "Les systèmes d'IA à haut risque doivent être enregistrés dans une base de données publique.",
            "Les développeurs de modèles à usage général devraient publier leurs données d'entraînement.",
            "Des bacs à sable réglementaires aideraient les jeunes pousses à tester leurs produits d'IA.",
            "Les personnes doivent savoir quand elles parlent avec un agent conversationnel.",
        ],
        &[
            "La identificación biométrica remota en espacios públicos debería prohibirse.",
            "Las pequeñas empresas necesitan evaluaciones de conformidad más sencillas para los sistemas de IA.",
            "Los sistemas de IA de alto riesgo deben registrarse en una base de datos pública.",
            "Los desarrolladores de modelos de uso general deberían revelar sus datos de entrenamiento.",
            "Los espacios controlados de pruebas ayudarían a las empresas emergentes a probar productos de IA.",
            "Las personas deben saber cuándo están hablando con un asistente automático.",
        ],
    ],
    [
        &[
            "Reusable packaging targets for beverages should be binding.",
            "Every member state should run a deposit return scheme for plastic bottles.",
            "Compostable packaging must not be mixed with plastic recycling.",
            "Online retailers ship far too much empty space in their boxes.",
            "Recycled content quotas should also cover food contact materials.",
            "Single-use packaging in restaurants should be phased out.",
        ],
        &[
            "Die Mehrwegquoten für Getränkeverpackungen sollten verbindlich sein.",
            "Jeder Mitgliedstaat sollte ein Pfandsystem für Plastikflaschen einführen.",
            "Kompostierbare Verpackungen dürfen nicht mit dem Kunststoffrecycling vermischt werden.",
            "Der Onlinehandel verschickt viel zu viel leeren Raum in seinen Kartons.",
            "Quoten für Rezyklatanteile sollten auch für Lebensmittelverpackungen gelten.",
            "Einwegverpackungen in der Gastronomie sollten schrittweise abgeschafft werden.",
        ],
        &[
            "Les objectifs de réemploi des emballages de boissons devraient être contraignants.",
            "Chaque État membre devrait mettre en place une consigne pour les bouteilles en plastique.",
            "Les emballages compostables ne doivent pas être mélangés au recyclage du plastique.",
            "Le commerce en ligne expédie beaucoup trop de vide dans ses cartons.",
            "Les quotas de contenu recyclé devraient aussi couvrir les emballages alimentaires.",
            "Les emballages à usage unique dans la restauration devraient être progressivement supprimés.",
        ],
        &[
            "Los objetivos de envases reutilizables para bebidas deberían ser vinculantes.",
            "Cada Estado miembro debería tener un sistema de depósito para las botellas de plástico.",
            "Los envases compostables no deben mezclarse con el reciclaje de plástico.",
            "El comercio electrónico envía demasiado espacio vacío en sus cajas.",
            "Las cuotas de contenido reciclado también deberían aplicarse a los envases alimentarios.",
            "Los envases de un solo uso en la restauración deberían eliminarse progresivamente.",
        ],
    ],
];

pub const REASONS: Bank = [
    [
        &[
            "Otherwise the climate targets for 2030 cannot be met.",
            "Households in rural areas would otherwise carry an unfair burden.",
            "Competitors outside the Union do not face these costs.",
            "Clear price signals are the cheapest way to cut emissions.",
            "Energy poverty is already rising across the region.",
        ],
        &[
            "Sonst können die Klimaziele für 2030 nicht erreicht werden.",
            "Haushalte auf dem Land würden sonst unfair belastet.",
            "Wettbewerber außerhalb der Union tragen diese Kosten nicht.",
            "Klare Preissignale sind der günstigste Weg, Emissionen zu senken.",
            "Die Energiearmut nimmt in der Region bereits zu.",
        ],
        &[
            "Sinon les objectifs climatiques pour 2030 ne pourront pas être atteints.",
            "Les ménages ruraux supporteraient sinon une charge injuste.",
            "Les concurrents hors de l'Union ne supportent pas ces coûts.",
            "Des signaux de prix clairs sont le moyen le moins cher de réduire les émissions.",
            "La précarité énergétique augmente déjà dans la région.",
        ],
        &[
            "De lo contrario no se cumplirán los objetivos climáticos para 2030.",
            "Los hogares rurales soportarían de otro modo una carga injusta.",
            "Los competidores de fuera de la Unión no tienen estos costes.",
            "Las señales de precio claras son la forma más barata de reducir las emisiones.",
            "La pobreza energética ya está aumentando en la región.",
        ],
    ],
    [
        &[
            "Fundamental rights are at stake.",
            "Compliance costs could push innovation out of Europe.",
            "Transparency builds trust in automated decisions.",
            "Discrimination by opaque algorithms is hard to prove.",
            "Enforcement differs too much between member states.",
        ],
        &[
            "Es geht um Grundrechte.",
            "Die Kosten der Einhaltung könnten Innovation aus Europa vertreiben.",
            "Transparenz schafft Vertrauen in automatisierte Entscheidungen.",
            "Diskriminierung durch undurchsichtige Algorithmen ist schwer nachzuweisen.",
            "Die Durchsetzung unterscheidet sich zu stark zwischen den Mitgliedstaaten.",
        ],
        &[
            "Les droits fondamentaux sont en jeu.",
            "Les coûts de mise en conformité pourraient chasser l'innovation hors d'Europe.",
            "La transparence renforce la confiance dans les décisions automatisées.",
            "La discrimination par des algorithmes opaques est difficile à prouver.",
            "L'application des règles diffère trop entre les États membres.",
        ],
        &[
            "Están en juego los derechos fundamentales.",
            "Los costes de cumplimiento podrían expulsar la innovación de Europa.",
            "La transparencia genera confianza en las decisiones automatizadas.",
            "La discriminación por algoritmos opacos es difícil de demostrar.",
            "La aplicación de las normas difiere demasiado entre los Estados miembros.",
        ],
    ],
    [
        &[
            "Packaging waste keeps growing despite existing rules.",
            "Recyclers need stable demand for secondary raw materials.",
            "Hygiene requirements make some targets unrealistic.",
            "Consumers are ready to return containers if it is convenient.",
            "Small producers cannot afford separate labelling for each country.",
        ],
        &[
            "Der Verpackungsmüll wächst trotz der bestehenden Regeln weiter.",
            "Recycler brauchen eine stabile Nachfrage nach Sekundärrohstoffen.",
            "Hygieneanforderungen machen einige Ziele unrealistisch.",
            "Verbraucher geben Behälter gerne zurück, wenn es bequem ist.",
            "Kleine Hersteller können sich keine eigene Kennzeichnung für jedes Land leisten.",
        ],
        &[
            "Les déchets d'emballages continuent d'augmenter malgré les règles existantes.",
            "Les recycleurs ont besoin d'une demande stable en matières premières secondaires.",
            "Les exigences d'hygiène rendent certains objectifs irréalistes.",
            "Les consommateurs sont prêts à rapporter les contenants si c'est pratique.",
            "Les petits producteurs ne peuvent pas payer un étiquetage différent pour chaque pays.",
        ],
        &[
            "Los residuos de envases siguen creciendo a pesar de las normas actuales.",
            "Los recicladores necesitan una demanda estable de materias primas secundarias.",
            "Los requisitos de higiene hacen que algunos objetivos sean poco realistas.",
            "Los consumidores están dispuestos a devolver envases si resulta cómodo.",
            "Los pequeños productores no pueden pagar un etiquetado distinto para cada país.",
        ],
    ],
];

pub const GROUPS: [&str; 7] =
    ["citizen", "company", "ngo", "academic_research", "public_authority", "trade_union", "anonymous"];

/// Openers per group (GROUPS order) and language (LANGS order).
pub const OPENERS: [[[&str; 2]; 4]; 7] = [
    [
        ["As a citizen I want to share my view.", "I am writing as a private person."],
        ["Als Bürgerin möchte ich meine Meinung teilen.", "Ich schreibe als Privatperson."],
        ["En tant que citoyen je souhaite donner mon avis.", "J'écris à titre personnel."],
        ["Como ciudadana quiero compartir mi opinión.", "Escribo a título personal."],
    ],
    [
        ["Our company has followed this initiative closely.", "We are a medium-sized manufacturer."],
        ["Unser Unternehmen verfolgt diese Initiative genau.", "Wir sind ein mittelständischer Hersteller."],
        ["Notre entreprise suit cette initiative de près.", "Nous sommes un fabricant de taille moyenne."],
        ["Nuestra empresa sigue de cerca esta iniciativa.", "Somos un fabricante de tamaño medio."],
    ],
    [
        ["Our organisation represents civil society groups.", "We are a consumer and environmental NGO."],
        [
            "Unsere Organisation vertritt zivilgesellschaftliche Gruppen.",
            "Wir sind ein Umwelt- und Verbraucherverband.",
        ],
        ["Notre organisation représente la société civile.", "Nous sommes une association de consommateurs."],
        ["Nuestra organización representa a la sociedad civil.", "Somos una asociación de consumidores."],
    ],
    [
        ["Our research group studies this field.", "As researchers we have analysed the proposal."],
        ["Unsere Forschungsgruppe untersucht dieses Gebiet.", "Als Forschende haben wir den Vorschlag analysiert."],
        ["Notre groupe de recherche étudie ce domaine.", "En tant que chercheurs nous avons analysé la proposition."],
        ["Nuestro grupo de investigación estudia este campo.", "Como investigadores hemos analizado la propuesta."],
    ],
    [
        [
            "This response is submitted by a regional authority.",
            "The municipality supports the aims of the initiative.",
        ],
        ["Diese Stellungnahme kommt von einer Landesbehörde.", "Die Gemeinde unterstützt die Ziele der Initiative."],
        ["Cette réponse est soumise par une autorité régionale.", "La commune soutient les objectifs de l'initiative."],
        ["Esta respuesta la presenta una autoridad regional.", "El ayuntamiento apoya los objetivos de la iniciativa."],
    ],
    [
        ["Our union represents workers in the sector.", "Workers must not pay the price of this transition."],
        [
            "Unsere Gewerkschaft vertritt die Beschäftigten der Branche.",
            "Die Beschäftigten dürfen nicht den Preis zahlen.",
        ],
        ["Notre syndicat représente les travailleurs du secteur.", "Les travailleurs ne doivent pas payer le prix."],
        ["Nuestro sindicato representa a los trabajadores del sector.", "Los trabajadores no deben pagar el precio."],
    ],
    [["", "Short comment."], ["", "Kurzer Kommentar."], ["", "Bref commentaire."], ["", "Comentario breve."]],
];

pub const ORGS: [&[&str]; 7] = [
    &[],
    &["Nordlicht Energie GmbH", "Atlantic Logistics Ltd", "Boxwell Packaging SA", "Datalytix BV"],
    &["Green Futures Network", "Consumers United Europe", "Digital Rights Watch"],
    &["Institute for Policy Studies", "University of Tartu Lab", "Centre for Circular Economy"],
    &["City of Lyon", "Region of Styria", "Municipality of Cork"],
    &["European Transport Workers", "IG Industrie", "Union Générale du Commerce"],
    &[],
];

fn countries(lang: &str) -> &'static [&'static str] {
    match lang {
        "en" => &["IE", "MT", "SE", "NL", "PL", "DK", "FI"],
        "de" => &["DE", "AT", "LU"],
        "fr" => &["FR", "BE", "LU"],
        _ => &["ES"],
    }
}

fn timestamp(rng: &mut ChaCha8Rng) -> String {
    let y = rng.gen_range(2021..=2023);
    let m = rng.gen_range(1..=12);
    let d = rng.gen_range(1..=28);
    let (h, mi, s) = (rng.gen_range(0..24), rng.gen_range(0..60), rng.gen_range(0..60));
    if rng.gen_bool(0.2) {
        format!("{y:04}-{m:02}-{d:02} {h:02}:{mi:02}:{s:02}")
    } else {
        format!("{y:04}-{m:02}-{d:02}T{h:02}:{mi:02}:{s:02}Z")
    }
}

/// One random dump line with upstream id `fb-{n}`.
fn line(rng: &mut ChaCha8Rng, n: usize) -> Value {
    let ini = rng.gen_range(0..INITIATIVES.len());
    let lang = *[0usize, 0, 0, 0, 1, 1, 2, 2, 3, 3].choose(rng).unwrap();
    let g = *[0usize, 0, 0, 1, 1, 2, 2, 3, 4, 5, 6].choose(rng).unwrap();
    let mut parts = Vec::new();
    let opener = OPENERS[g][lang][rng.gen_range(0..2)];
    if !opener.is_empty() {
        parts.push(opener);
    }
    parts.push(CLAIMS[ini][lang].choose(rng).unwrap());
    let r1 = rng.gen_range(0..REASONS[ini][lang].len());
    parts.push(REASONS[ini][lang][r1]);
    if rng.gen_bool(0.3) {
        let r2 = (r1 + rng.gen_range(1..REASONS[ini][lang].len())) % REASONS[ini][lang].len();
        parts.push(REASONS[ini][lang][r2]);
    }
    let mut text = parts.join(" ");
    if rng.gen_bool(0.1) {
        text = format!("<p>{text}</p>");
    }
    let i = &INITIATIVES[ini];
    let mut v = json!({
        "record_id": format!("fb-{n:06}"),
        "initiative_id": i.id,
        "initiative_title": i.title,
        "topic": i.topic,
        "stakeholder_group": GROUPS[g],
        "submitted_at": timestamp(rng),
        "text": text,
    });
    if let Some(org) = ORGS[g].choose(rng) {
        v["organization_name"] = json!(org);
    }
    if !(GROUPS[g] == "anonymous" && rng.gen_bool(0.5)) {
        v["country"] = json!(countries(LANGS[lang]).choose(rng).unwrap());
    }
    if rng.gen_bool(0.85) {
        v["language"] = json!(LANGS[lang]);
    }
    v
}

/// The main fixture dump: generated lines plus a few adversarial ones.
pub fn feedback_dump() -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut out = Vec::new();
    for n in 0..1250 {
        serde_json::to_writer(&mut out, &line(&mut rng, n)).unwrap();
        out.push(b'\n');
    }
    let adversarial: [&[u8]; 6] = [
        b"{\"initiative_id\": \"PI-2021-ETD\", \"text\": \"unterminated\n",
        b"{\"initiative_id\": \"PI-2021-ETD\", \"submitted_at\": \"2022-01-01T00:00:00Z\"}\n",
        b"{\"initiative_id\": \"PI-2021-ETD\", \"text\": \"<p>   </p>\", \"submitted_at\": \"2022-01-01T00:00:00Z\"}\n",
        b"{\"initiative_id\": \"PI-2021-ETD\", \"text\": \"A valid comment without a date.\"}\n",
        b"{\"initiative_id\": \"PI-2021-ETD\", \"text\": \"\xff\xfe broken bytes\", \"submitted_at\": \"2022-01-01\"}\n",
        b"[1, 2, 3]\n",
    ];
    for a in adversarial {
        out.extend_from_slice(a);
    }
    out
}

/// 100 lines: 95 distinct valid records, 2 malformed lines and 3 exact
/// duplicates of earlier lines.
pub fn dump_100() -> Vec<u8> {
    const COUNTRIES: [&str; 6] = ["DE", "FR", "ES", "IT", "PL", "SE"];
    let mut lines: Vec<String> = (0..95)
        .map(|i| {
            json!({
                "record_id": format!("s-{i:03}"),
                "initiative_id": if i % 2 == 0 { "PI-A" } else { "PI-B" },
                "initiative_title": if i % 2 == 0 { "Initiative A" } else { "Initiative B" },
                "topic": if i % 2 == 0 { "energy" } else { "transport" },
                "stakeholder_group": GROUPS[i % 6],
                "country": COUNTRIES[i % 6],
                "language": "en",
                "submitted_at": format!("2023-02-{:02}T10:00:00Z", 1 + i % 28),
                "text": format!("Comment number {i} about the proposal and its expected impact."),
            })
            .to_string()
        })
        .collect();
    for (at, src) in [(20, 3), (50, 10), (80, 41)] {
        let mut dup: Value = serde_json::from_str(&lines[src]).unwrap();
        dup["record_id"] = json!(format!("dup-{src}"));
        dup["submitted_at"] = json!("2024-06-01T00:00:00Z");
        lines.insert(at, dup.to_string());
    }
    lines.insert(30, "{not json".into());
    lines.insert(70, json!({"initiative_id": "PI-A"}).to_string());
    assert_eq!(lines.len(), 100);
    let mut out = lines.join("\n").into_bytes();
    out.push(b'\n');
    out
}
