# bchhun, {2019-07-17}
