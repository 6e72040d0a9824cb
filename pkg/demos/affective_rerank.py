"""
Reranking a recommendation list by emotional fit
================================================

Train a small factor model, ask for the movies nearest a seed in latent
space, then reorder that list by how close each movie's emotion vector
sits to the viewer's profile.
"""

import numpy as np

from affectrec import Hyper, train
from affectrec.affect import user_uvec
from affectrec.recsys import top_n_from_seed
from affectrec.rerank import default_metrics, rerank
from affectrec.synthetic import dirichlet_mvecs, watch_histories

events = watch_histories(n_users=40, n_items=120, seed=3)
model = train(events, Hyper(k=8, epochs=20, seed=3))
print("training rmse by epoch:", np.round(model.rmse_history[::5], 3))

mvecs = dirichlet_mvecs(model.item_ids, seed=4)

# one viewer: their history builds the profile, the last movie is the seed
user = 7
history = [e for e in events if e.user_id == user]
watched = {e.movie_id for e in history}
seed = history[-1].movie_id
uvec = user_uvec([mvecs[m] for m in watched])

mid = top_n_from_seed(model, seed, n=10, exclude=watched)
print(f"\nuser {user}, seed movie {seed}")
print("Mid ", mid.movie_ids)

# each metric produces a permutation of the same ten movies
for metric in default_metrics():
    print(f"{metric.short:4s}", rerank(mid, mvecs, uvec, metric).movie_ids)
