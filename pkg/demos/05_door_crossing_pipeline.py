"""The full pipeline: walking between two buildings with door-crossing switches.

A pedestrian leaves building A, walks outdoors, and enters building B. The
tracker switches environments only when a door-opening event and a geometric
zone crossing coincide within five steps; a turn-back right in front of the
door must not switch.
"""

from seamloc import (
    PipelineConfig,
    crossing_script,
    generate_walk,
    track,
    turn_back_script,
    two_building_plan,
)
from seamloc.sim import CALIBRATED_NOISE

plan = two_building_plan()
print(f"floor plan: {len(plan.walls)} walls, doors {[d.id for d in plan.doors]}")

for label, script in (("crossing walk", crossing_script(plan)), ("turn-back walk", turn_back_script(plan))):
    trace, truth = generate_walk(script, CALIBRATED_NOISE, doors=plan.doors)
    path, log = track(trace, plan, PipelineConfig())
    print(f"\n{label}: {len(path)} steps, {len(log.door_opens)} door openings")
    print(f"  true crossings : {list(truth.crossings) or 'none'}")
    print(f"  switches       : {[(s.step_index, s.door_id, f'{s.from_env}->{s.to_env}') for s in log.switches] or 'none'}")
    timeline = []
    current = None
    for i, env in enumerate(log.environments):
        if env != current:
            timeline.append(f"step {i}: {env}")
            current = env
    print(f"  environment    : {'; '.join(timeline)}")
    final = path[-1].position
    print(f"  final estimate ({final.x:.2f}, {final.y:.2f}) vs truth ({truth.final_position.x:.2f}, {truth.final_position.y:.2f})")
