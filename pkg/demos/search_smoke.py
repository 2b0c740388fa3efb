"""Collision search in the one-parameter S3 sextic family with small order caps.

With m, n <= 6 the scan finds t^2 - 1300 dividing both R_{4,6} and R_{6,4}.
"""
from commontorsion.search import SearchConfig, common_factor_scan

rep = common_factor_scan(SearchConfig(m_max=6, n_max=6, exact=True))
print("status:", rep.status)
for cf in rep.common:
    d = cf.to_dict()
    print("factor", d["lifted"], "witnesses", d["witnesses"])
