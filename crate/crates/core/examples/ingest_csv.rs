//! Read a CSV with a categorical column into instances and split it into
//! human decision sets plus a gold-standard pool.

use mdba::data::{ingest_reader, sample_gs_pool, stratified_partition};
use mdba::DatasetSchema;

fn main() -> mdba::Result<()> {
    let mut csv = String::from("age,sex,workclass,income\n");
    for i in 0..400 {
        let sex = if i % 2 == 0 { "Female" } else { "Male" };
        let work = ["private", "public", "self"][i % 3];
        let income = u8::from(i % 5 == 0);
        csv.push_str(&format!("{},{sex},{work},{income}\n", 20 + i % 45));
    }

    let mut schema = DatasetSchema::new(vec!["age".into(), "workclass".into()], "sex", "Female");
    schema.categorical_features = vec!["workclass".into()];
    schema.label_column = Some("income".into());

    let dataset = ingest_reader(csv.as_bytes(), &schema)?;
    println!("{} instances, encoded features {:?}", dataset.instances.len(), dataset.feature_names);

    let gold = sample_gs_pool(&dataset.instances, 40, 7)?;
    let ids = gold.ids();
    let rest: Vec<_> = dataset.instances.iter().filter(|i| !ids.contains(&i.id)).cloned().collect();
    let parts = stratified_partition(&rest, 4, 7)?;
    println!("gold pool {} instances; human sets {:?}", gold.len(), parts.iter().map(Vec::len).collect::<Vec<_>>());
    Ok(())
}
