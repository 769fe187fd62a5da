method Pair(a: int) returns (x: int, b: bool)
{
  x := a;
  b := a > 0;
}

method Twice(a: int) returns (r: int)
{
  r := a * 2;
}

method Names() returns (s: seq<string>)
{
  s := ["a", "b"];
}

class Box {
  constructor() {}
}

method MakeBox() returns (b: Box)
{
  b := new Box();
}

function Max(a: int, b: int): int
{
  if a > b then a else b
}

method Caller(k: int) returns (out: int)
{
  var x, ok := Pair(k);
  var y := Twice(x);
  var names := Names();
  var box := MakeBox();
  out := Max(y, k);
}
