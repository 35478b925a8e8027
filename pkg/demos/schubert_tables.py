"""Small Schubert calculus tables on Grassmannians Gr(k, N+1)."""

from stability_forge.chow import Partition, grassmannian_degree, schubert_integral

#%% Plucker degrees
for k, N1 in [(2, 4), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7)]:
    print(f"deg Gr({k},{N1}) = {grassmannian_degree(k, N1)}")

#%% the intersection matrix of codimension-two classes on Gr(2,4)
classes = [Partition((2,)), Partition((1, 1))]
for a in classes:
    print(a, [schubert_integral([a, b], 2, 4) for b in classes])

#%% beta: sigma_2 * sigma_1^(dim-2)
for k, N1 in [(2, 4), (2, 5), (3, 5)]:
    dim = k * (N1 - k)
    print(f"beta on Gr({k},{N1}) = {schubert_integral([2] + [1] * (dim - 2), k, N1)}")
