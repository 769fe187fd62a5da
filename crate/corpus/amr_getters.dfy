class Point {
  var x: int
  var y: int

  method GetX() returns (r: int)
  {
    r := x;
  }

  method getY() returns (r: int)
  {
    r := y;
  }

  method Describe() returns (s: int)
  {
    var a := GetX();
    var b := getY();
    s := a + b;
  }
}
