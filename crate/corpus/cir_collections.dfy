class Node {
  var next: Node?
  constructor() { next := null; }
}

method Collections() returns (n: int)
{
  var s := [1, 2, 3];
  var st := {1, 2};
  var ms := multiset{4, 4};
  var m := map[1 := true, 2 := false];
  var empty: seq<int> := [];
  var node: Node? := new Node();
  var node2 := new Node();
  n := |s| + |st| + |ms| + |m| + |empty|;
}
