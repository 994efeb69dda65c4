import sys, time, json
import numpy as np, torch
torch.set_num_threads(1)
from tokendial.synthworld import SceneDistribution, make_dataset
from tokendial.backbone import BackboneConfig, VideoBackbone, train_backbone, save_checkpoint

t0 = time.time()
dist = SceneDistribution()
small = make_dataset(dist, 256, seed=11, frames=8, height=32, width=32)
big = make_dataset(dist, 64, seed=12, frames=12, height=48, width=48)
clips = small + big
print(f"dataset built: {len(clips)} clips in {time.time()-t0:.1f}s", flush=True)

model = VideoBackbone(BackboneConfig(), seed=0)
log = train_backbone(
    model, clips, steps=2000, cond_drop_prob=0.1, lr=3e-4, batch_size=8, seed=0,
    progress=lambda s, l: print(f"step {s}: loss {l:.4f} ({time.time()-t0:.0f}s)", flush=True),
)
print("val loss:", log.val_loss, "zero-pred:", log.zero_predictor_loss,
      "ratio:", log.val_loss / log.zero_predictor_loss, flush=True)
save_checkpoint(model, ".dev_cache/backbone.tdbk", {"steps": 2000, "lr": 3e-4})
json.dump({"val": log.val_loss, "zero": log.zero_predictor_loss, "losses": log.losses},
          open(".dev_cache/backbone_log.json", "w"))
print(f"done in {time.time()-t0:.0f}s", flush=True)
