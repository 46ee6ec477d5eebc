use talents::env::{load_layout, Event};
use talents::partner::make_population;

fn main() {
    let pop = make_population(8, 11).unwrap();
    let mut s = load_layout("forced_coord", 1).unwrap();
    let mut p0 = pop[0].clone();
    let mut p1 = pop[3].clone();
    p0.reset(32);
    p1.reset(33);
    for t in 0..400 {
        let a0 = p0.act(&s, 0);
        let a1 = p1.act(&s, 1);
        let (_, ev) = s.step([a0, a1]);
        for e in &ev {
            match e {
                Event::IllegalInteract { .. } => {}
                _ => println!("t={t} {e:?}"),
            }
        }
        if t % 80 == 0 {
            println!(
                "t={t} p0={:?}/{:?} p1={:?}/{:?} st={:?} orders={:?} counters={:?} score={}",
                s.players[0].pos, s.players[0].held, s.players[1].pos, s.players[1].held,
                s.stations.iter().map(|st| format!("{:?}", st.phase)).collect::<Vec<_>>(),
                s.orders.iter().map(|o| format!("{:?}", o.recipe)).collect::<Vec<_>>(),
                s.counter_items, s.score
            );
        }
    }
}
