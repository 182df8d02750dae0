"""Walkthrough: the whole engine end to end, store on disk, queries over HTTP.

Writes a small NDJSON corpus, runs ingest -> cluster -> sentiment into a
store directory, then queries the service in-process: dataset manifests,
the scented-widget series, a three-day list window, and a similar-cluster
pivot off a node detail.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from crowdlens.cluster import ClusteringConfig
from crowdlens.corpus import parse_timestamp
from crowdlens.pipeline import PipelineConfig, run_all
from crowdlens.service import create_app

out = Path("demo_output")
out.mkdir(exist_ok=True)

# three days, three conversations; the storm talk turns dark on day 2
topics = {
    "flood": (["storm", "flood", "river", "rising", "sandbags"],
              ["worried", "scared", "awful", "terrible"]),
    "match": (["match", "goal", "team", "striker", "stadium"],
              ["great", "amazing", "win", "happy"]),
    "bakery": (["bread", "bakery", "sourdough", "ovens", "croissant"],
               ["love", "nice", "good", "sweet"]),
}
lines = []
for day in range(3):
    for topic, (words, moods) in sorted(topics.items()):
        for u in range(6):
            user = f"{topic}{u}"
            mood_hits = 3 if (topic == "flood" and day == 2) else 1
            text = " ".join(words[(u + i + day) % len(words)] for i in range(4))
            text += " " + " ".join(moods[(u + i) % len(moods)]
                                   for i in range(mood_hits))
            lines.append(json.dumps({
                "user": user,
                "ts": f"2011-05-{day + 1:02d}T{9 + u:02d}:00:00Z",
                "text": text + f" #{topic}",
            }))
corpus_path = out / "demo_posts.ndjson"
corpus_path.write_text("\n".join(lines) + "\n")
print(f"wrote {len(lines)} posts to {corpus_path}")

config = PipelineConfig(
    inputs=[str(corpus_path)],
    store_dir=str(out / "store"),
    dataset="demo",
    epoch_start=parse_timestamp("2011-05-01T00:00:00Z"),
    step_count=3,
    clustering=ClusteringConfig(p=2, k=4, k_low=4, seed=7),
    jobs=1,
)
report = run_all(config)
print(f"pipeline done in {report['seconds']:.2f}s")

client = TestClient(create_app(out / "store"))

manifest = client.get("/datasets").json()[0]
print(f"\ndataset '{manifest['dataset']}': {manifest['step_count']} steps, "
      f"labels {manifest['step_labels']}")

series = client.get("/datasets/demo/series", params={"mode": "posneg"}).json()
print("sentiment extremes per day:")
for point in series:
    print(f"  day {point['step']}: max_pos={point['pos']:.2f} "
          f"max_neg={point['neg']:.2f}")

window = client.get("/datasets/demo/window", params={
    "mode": "negative", "view": "list", "window_start": 0, "window_len": 3,
}).json()
print("\nmost negative conversations per day (list view):")
for scene in window:
    top = scene["items"][0] if scene["items"] else None
    if top:
        print(f"  day {scene['day']}: U: {top['users']} "
              f"{' '.join(top['keywords'][:4])}")

# pivot: find clusters similar to day 0's most negative cluster
target = window[0]["items"][0]["node"]
detail = client.get(f"/datasets/demo/node/0/{target}").json()
print(f"\nnode {target} detail: size={detail['size']} "
      f"h={detail['sent']['h']:+.2f} top terms "
      f"{[t for t, _ in detail['centroid_top'][:4]]}")

similar = client.get("/datasets/demo/window", params={
    "mode": "similar", "sel_step": 0, "sel_node": target,
    "view": "list", "window_start": 0, "window_len": 3,
}).json()
print("closest clusters on each day:")
for scene in similar:
    top = scene["antichain"][0]
    print(f"  day {scene['day']}: node {top['node']} "
          f"cosine {top['score']:.3f}")
