//! Generate z-normalized random walks, write them as CSV, load them back and
//! cut a shuffled trial stream.

use streamdiv::data;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ds = data::generate_random_walks(100, 64, 5)?;
    let dir = std::env::temp_dir().join("streamdiv-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("walks.csv");
    data::write_csv(&ds, &path)?;

    let back = data::load_csv(&path)?;
    let max_err = ds
        .rows
        .iter()
        .flatten()
        .zip(back.rows.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("{} rows x {} dims, round-trip max error {max_err:e}", back.len(), back.dim());

    let stream = data::reshuffle(&ds, 9);
    let order: Vec<usize> = data::permutation(ds.len(), 9).into_iter().take(10).collect();
    println!("trial stream of {} instances, first rows {order:?}", stream.len());
    Ok(())
}
