use std::collections::HashMap;

use super::record::FeedbackRecord;

/// Duplicate identity: same initiative, same normalized text.
pub fn dedup_key(r: &FeedbackRecord) -> (&str, &str) {
    (r.initiative_id.as_str(), r.text.as_str())
}

/// Collapses records sharing `(initiative_id, text)` to the one with the
/// earliest `submitted_at` (first occurrence on equal timestamps). Survivors
/// keep their input order. Returns the kept records and the dropped count.
pub fn deduplicate(records: Vec<FeedbackRecord>) -> (Vec<FeedbackRecord>, usize) {
    let mut winner: HashMap<(&str, &str), usize> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        winner
            .entry(dedup_key(r))
            .and_modify(|w| {
                if r.submitted_at < records[*w].submitted_at {
                    *w = i;
                }
            })
            .or_insert(i);
    }
    let mut keep = vec![false; records.len()];
    for &i in winner.values() {
        keep[i] = true;
    }
    let dropped = records.len() - winner.len();
    let kept = records.into_iter().zip(keep).filter_map(|(r, k)| k.then_some(r)).collect();
    (kept, dropped)
}

#[cfg(test)]
mod tests {
    use chrono::{TimeZone, Utc};
    use proptest::prelude::*;

    use super::*;
    use crate::ingest::record::StakeholderGroup;

    fn rec(id: &str, init: &str, text: &str, day: u32) -> FeedbackRecord {
        FeedbackRecord {
            record_id: id.into(),
            initiative_id: init.into(),
            initiative_title: String::new(),
            topic: "t".into(),
            stakeholder_group: StakeholderGroup::Citizen,
            organization_name: None,
            country: "DE".into(),
            language: "en".into(),
            submitted_at: Utc.with_ymd_and_hms(2024, 1, day, 0, 0, 0).unwrap(),
            text: text.into(),
        }
    }

    // Pairwise oracle: a record survives iff no other record with the same key
    // is strictly earlier, or equally early and earlier in the input.
    fn brute_force(records: &[FeedbackRecord]) -> (Vec<String>, usize) {
        let mut kept = Vec::new();
        for (i, r) in records.iter().enumerate() {
            let beaten = records.iter().enumerate().any(|(j, o)| {
                j != i
                    && dedup_key(o) == dedup_key(r)
                    && (o.submitted_at < r.submitted_at || (o.submitted_at == r.submitted_at && j < i))
            });
            if !beaten {
                kept.push(r.record_id.clone());
            }
        }
        let dropped = records.len() - kept.len();
        (kept, dropped)
    }

    #[test]
    fn later_duplicate_dropped() {
        let input = vec![
            rec("1", "X", "alpha", 1),
            rec("2", "X", "same text", 2),
            rec("3", "X", "gamma", 3),
            rec("4", "X", "same text", 4),
            rec("5", "X", "delta", 5),
        ];
        let (oracle_ids, oracle_dropped) = brute_force(&input);
        let (kept, dropped) = deduplicate(input);
        let ids: Vec<_> = kept.iter().map(|r| r.record_id.clone()).collect();
        assert_eq!(ids, vec!["1", "2", "3", "5"]);
        assert_eq!(dropped, 1);
        assert_eq!((ids, dropped), (oracle_ids, oracle_dropped));
    }

    #[test]
    fn earlier_timestamp_wins_even_when_later_in_input() {
        let (kept, dropped) = deduplicate(vec![rec("a", "X", "t", 9), rec("b", "X", "t", 2)]);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].record_id, "b");
        assert_eq!(dropped, 1);
    }

    #[test]
    fn same_text_different_initiative_is_kept() {
        let (kept, dropped) = deduplicate(vec![rec("a", "X", "t", 1), rec("b", "Y", "t", 1)]);
        assert_eq!(kept.len(), 2);
        assert_eq!(dropped, 0);
    }

    #[test]
    fn identity_and_empty() {
        let input = vec![rec("1", "X", "a", 1), rec("2", "X", "b", 1)];
        let (kept, dropped) = deduplicate(input.clone());
        assert_eq!(kept, input);
        assert_eq!(dropped, 0);
        assert_eq!(deduplicate(Vec::new()), (Vec::new(), 0));
    }

    proptest! {
        #[test]
        fn matches_pairwise_oracle(spec in prop::collection::vec((0u8..3, 0u8..4, 1u32..5), 0..40)) {
            let input: Vec<_> = spec
                .iter()
                .enumerate()
                .map(|(i, (init, text, day))| {
                    rec(&i.to_string(), &format!("I{init}"), &format!("text {text}"), *day)
                })
                .collect();
            let (oracle_ids, oracle_dropped) = brute_force(&input);
            let (kept, dropped) = deduplicate(input);
            let ids: Vec<_> = kept.into_iter().map(|r| r.record_id).collect();
            prop_assert_eq!(ids, oracle_ids);
            prop_assert_eq!(dropped, oracle_dropped);
        }
    }
}
