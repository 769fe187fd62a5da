trait Shape {
  var numSides: int
}

class Rectangle extends Shape {
  var width: real
  var height: real

  constructor(w: real, h: real)
    ensures numSides == 4
  {
    width := w;
    height := h;
    numSides := 4;
  }
}

class Triangle extends Shape {
  constructor()
    ensures numSides == 3
  {
    numSides := 3;
  }
}

method Main()
{
  var shape: Shape;
  var rectangle := new Rectangle(10.0, 20.0);
  var triangle := new Triangle();
  shape := rectangle;
  print shape.numSides, "\n";
}
