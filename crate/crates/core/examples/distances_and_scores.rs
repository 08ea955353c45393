//! Scores, leave-one-out scores, reward and the failure indicator on a tiny
//! hand-made stream.

use streamdiv::metrics::{self, Instance, SelectionState};

fn main() -> Result<(), metrics::MetricsError> {
    let stream: Vec<Instance> = [[0.0, 0.0], [1.0, 0.5], [4.8, 0.0], [2.0, 3.0], [1.8, 2.9]]
        .iter()
        .enumerate()
        .map(|(i, v)| Instance::new(i + 1, v.to_vec()))
        .collect();

    let mut sel = SelectionState::new();
    sel.push(stream[0].clone())?;
    for x in &stream[1..] {
        let score = metrics::candidate_score(&sel, x)?;
        println!("x{} score against {:?}: {score:.4}", x.id, sel.positions());
        if score > 3.0 {
            sel.push(x.clone())?;
        }
    }
    println!("selected {:?}", sel.positions());
    println!("leave-one-out scores {:?}", sel.selected_scores());
    println!("reward {:.4}", metrics::reward(&sel, sel.len())?);
    println!("mindist_within {:.4}", metrics::mindist_within(sel.selected())?);

    // with 2 of 4 slots filled at step 4 of 5 there are 2 steps left for 2 slots
    println!("forced at step 4? {}", metrics::is_failure(4, 5, 2, 4));
    println!("failure rate {:.2}", metrics::failure_rate(&[true, false, false, false])?);
    Ok(())
}
